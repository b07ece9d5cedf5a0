use std::f64::consts::PI;

use num_bigint::BigUint;
use proptest::prelude::*;
use qosc::flows::{base_vortex, vortex_simulate, wedge, AnnulusSpec, VortexState};
use qosc::nls::{qnls_rhs_order2, GridField};
use qosc::oscillators::{
    evolve_classical, golden_coherent, golden_levels_exact, sym_q_spectrum, ComplexAmplitude,
    HamiltonianProfile,
};
use qosc::qcalc::{
    fib_factorial, fibonacci, fibonacci_f64, golden_derivative, q_exp, q_number, sym_q_number,
    SeriesControl,
};
use qosc::qschrodinger::{
    boost_apply, monomial_basis, qkf_polynomial, schrodinger_residual, symmetry_commutators,
    DispersionOperator,
};
use qosc::C64;

fn cplx(r: f64, a: f64) -> C64 {
    C64::from_polar(r, a)
}

proptest! {
    #[test]
    fn q_number_recursion(n in 0u32..=50, q in prop::sample::select(vec![1.1f64, 2.0, 5.0])) {
        let lhs = q_number(n + 1, q);
        let rhs = 1.0 + q * q_number(n, q);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
    }

    #[test]
    fn sym_q_three_term(n in 1u32..=50, lambda in prop::sample::select(vec![0.1, 0.5, 1.0])) {
        let q = f64::exp(lambda);
        let lhs = sym_q_number(n + 1, lambda) + sym_q_number(n - 1, lambda);
        let rhs = (q + 1.0 / q) * sym_q_number(n, lambda);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
    }

    #[test]
    fn q_exp_product(r in 0.0f64..=0.9, a in 0.0..2.0 * PI, q in prop::sample::select(vec![1.5f64, 2.0, 4.0])) {
        let z = cplx(r, a);
        let prod: C64 = (1..=64).map(|k| 1.0 - z / q.powi(k)).product();
        let ctl = SeriesControl::default();
        let series = q_exp(-z / (1.0 - 1.0 / q), q, &ctl).unwrap() / (1.0 - z);
        prop_assert!((prod - series).norm() <= 1e-10 * prod.norm());
    }

    #[test]
    fn golden_derivative_on_polynomials(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=13),
        r in 0.2f64..1.5,
        a in 0.0..2.0 * PI,
    ) {
        let c: Vec<C64> = coeffs.iter().map(|&(x, y)| C64::new(x, y)).collect();
        let z = cplx(r, a);
        let p = |w: C64| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ck| acc * w + ck);
        let d = golden_derivative(p, z).unwrap();
        let expect: C64 = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| ck * fibonacci_f64(k as u64) * z.powi(k as i32 - 1))
            .sum();
        let scale: f64 = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| ck.norm() * fibonacci_f64(k as u64) * r.powi(k as i32 - 1))
            .sum();
        prop_assert!((d - expect).norm() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn golden_eigenfunctions(k in 0u64..=20, r in 0.2f64..1.5, a in 0.0..2.0 * PI) {
        let z = cplx(r, a);
        let norm = fib_factorial(k).to_string().parse::<f64>().unwrap().sqrt();
        let psi = |w: C64| w.powu(k as u32) / norm;
        let lhs = z * golden_derivative(psi, z).unwrap();
        let rhs = psi(z) * fibonacci_f64(k);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn classical_evolution_keeps_action(j in 0.0f64..5.0, angle in 0.0..2.0 * PI, t in -10.0f64..10.0, lambda in 0.0f64..1.0) {
        let a = ComplexAmplitude::from_action_angle(j, angle);
        for profile in [HamiltonianProfile::linear(1.3), HamiltonianProfile::sym_q(lambda)] {
            let b = evolve_classical(a, &profile, t).unwrap();
            prop_assert!((b.0.norm() - a.0.norm()).abs() <= 4.0 * f64::EPSILON * a.0.norm().max(1.0));
        }
    }

    #[test]
    fn frequency_is_numeric_derivative(j in 0.1f64..5.0, lambda in 0.05f64..1.0, m in 0.5f64..2.0) {
        for profile in [
            HamiltonianProfile::sym_q(lambda),
            HamiltonianProfile::semi_relativistic(m, 1.0, 1.0).unwrap(),
        ] {
            let e = 1e-5;
            let num = (profile.energy(j + e).unwrap() - profile.energy(j - e).unwrap()) / (2.0 * e);
            let w = profile.frequency(j).unwrap();
            prop_assert!((num - w).abs() <= 1e-6 * w.abs());
        }
    }

    #[test]
    fn sym_q_forms_agree(n_max in 0u64..=50, lambda in prop::sample::select(vec![0.1, 0.5, 1.0])) {
        let t = sym_q_spectrum(lambda, n_max).unwrap();
        for l in &t.levels {
            let n = l.n as u32;
            let sum = 0.5 * (sym_q_number(n, lambda) + sym_q_number(n + 1, lambda));
            prop_assert!((sum - l.energy).abs() <= 1e-12 * l.energy);
        }
    }

    #[test]
    fn coherent_lowering(r in 0.0f64..2.0, a in 0.0..2.0 * PI) {
        let beta = cplx(r, a);
        let s = golden_coherent(beta, 60, &SeriesControl::default()).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        let low = s.lowered();
        for (l, c) in low.iter().zip(&s.coeffs) {
            prop_assert!((l - beta * c).norm() < 1e-10);
        }
    }

    #[test]
    fn wedge_velocity_scale_covariance(
        n in 1u32..=6,
        r0 in 0.5f64..2.0,
        frac in 0.1f64..0.9,
        r in 0.1f64..3.0,
        a in 0.0..2.0 * PI,
    ) {
        let alpha = PI / f64::from(n);
        let z0 = cplx(r0, frac * alpha);
        let f = wedge(&base_vortex(z0, 1.0), n).unwrap();
        let q2 = cplx(1.0, 2.0 * alpha);
        let z = cplx(r, a);
        if f.singularities().iter().all(|s| (s - z).norm() > 1e-2 && (s - q2 * z).norm() > 1e-2) {
            let (v1, v2) = (f.velocity(z).unwrap(), f.velocity(q2 * z).unwrap());
            // velocity is conj(F'), so conj(F'(q^2 z)) = conj(q^-2 F'(z))
            let expect = v1 * q2;
            prop_assert!((v2 - expect).norm() <= 1e-10 * v1.norm().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn qkf_solves_and_boosts(lambda in prop::sample::select(vec![0.0, 0.3, 1.0]), hbar in 0.5f64..1.5, m in 0.5f64..2.0) {
        let disp = DispersionOperator::new(lambda, hbar, m).unwrap();
        for n in 0..=8 {
            let p = qkf_polynomial(n, &disp);
            prop_assert!(schrodinger_residual(&p, &disp).max_abs() < 1e-12 * p.max_abs().max(1.0));
            if n <= 7 {
                let next = qkf_polynomial(n + 1, &disp);
                prop_assert!(boost_apply(&p, &disp).relative_distance(&next) < 1e-12);
            }
        }
    }

    #[test]
    fn symmetry_algebra(lambda in 0.0f64..1.2, hbar in 0.5f64..1.5, m in 0.5f64..2.0) {
        let disp = DispersionOperator::new(lambda, hbar, m).unwrap();
        let basis = monomial_basis(10, disp.params());
        let report = symmetry_commutators(&disp, &basis).unwrap();
        prop_assert!(report.max_residual() < 1e-12, "{report:?}");
    }

    #[test]
    fn qnls_parity(lambda in 0.0f64..1.0, kappa in 0.0f64..1.5, shift in -3.0f64..3.0) {
        let f = GridField::sample(-20.0, 40.0, 256, |x| {
            C64::from_polar((-(x - shift).powi(2)).exp(), 0.4 * x)
        })
        .unwrap();
        let a = qnls_rhs_order2(&f, kappa, lambda, 1.0, 0.5).unwrap();
        let b = qnls_rhs_order2(&f, kappa, -lambda, 1.0, 0.5).unwrap();
        prop_assert!(a.axpy(C64::new(-1.0, 0.0), &b).max_abs() <= 1e-12 * a.max_abs().max(1.0));
    }

    #[test]
    fn vortex_energy_conserved(r in 1.1f64..1.9, a in 0.0..2.0 * PI, gamma in prop::sample::select(vec![-2.0, 1.0, 3.0])) {
        let spec = AnnulusSpec::new(1.0, 2.0, 16).unwrap();
        let state = VortexState { z0: cplx(r, a), gamma };
        let tr = vortex_simulate(state, &spec, 1e-3, 200, 20, &SeriesControl::default()).unwrap();
        prop_assert!(tr.radius_drift < 1e-8);
        prop_assert!(tr.energy_drift < 1e-8);
    }
}

#[test]
fn fibonacci_integer_recursion() {
    let mut naive = vec![BigUint::from(0u32), BigUint::from(1u32)];
    for n in 2..=301 {
        let next = &naive[n - 1] + &naive[n - 2];
        naive.push(next);
    }
    for (n, f) in naive.iter().enumerate() {
        assert_eq!(&fibonacci(n as u64), f);
    }
    let levels = golden_levels_exact(300);
    for n in 1..300 {
        assert_eq!(levels[n + 1], &levels[n] + &levels[n - 1]);
    }
}
