//! Recursion operator and the flows `i sigma_3 (psi, psibar)_t = R^N (psi, psibar)`.

use super::grid::{edge_ratio, Doublet, GridField, SpectralGrid, DECAY_GUARD_TOL};
use crate::{Error, Result, C64, I};

/// Recursion operator linearized around a background `(psi, psibar)`.
///
/// ```text
/// R = i sigma_3 [ D + 2k^2 psi I(psibar .)     -2k^2 psi I(psi .)
///                 -2k^2 psibar I(psibar .)      D + 2k^2 psibar I(psi .) ]
/// ```
/// with `I` the cumulative integral from the left end.
#[derive(Debug, Clone)]
pub struct Recursion<'a> {
    background: &'a GridField,
    kappa: f64,
    grid: SpectralGrid,
}

pub(crate) fn check_decay(f: &[C64]) -> Result<()> {
    let r = edge_ratio(f);
    if r > DECAY_GUARD_TOL {
        Err(Error::DecayViolation { edge: r })
    } else {
        Ok(())
    }
}

impl<'a> Recursion<'a> {
    pub fn new(background: &'a GridField, kappa: f64) -> Result<Self> {
        check_decay(&background.psi)?;
        check_decay(&background.psibar)?;
        Ok(Self {
            background,
            kappa,
            grid: SpectralGrid::for_field(background)?,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn background(&self) -> &GridField {
        self.background
    }

    /// `I(a * b)` pointwise product then cumulative integral.
    pub(crate) fn integral_of_product(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let prod: Vec<C64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.grid.antiderivative(&prod)
    }

    pub fn apply(&self, d: &Doublet) -> Result<Doublet> {
        check_decay(&d.upper)?;
        check_decay(&d.lower)?;
        let (psi, psibar) = (&self.background.psi, &self.background.psibar);
        let k2 = 2.0 * self.kappa * self.kappa;
        let ux = self.grid.derivative(&d.upper);
        let vx = self.grid.derivative(&d.lower);
        let ibu = self.integral_of_product(psibar, &d.upper);
        let ipv = self.integral_of_product(psi, &d.lower);
        let n = d.len();
        let mut out = Doublet::zeros(n);
        for j in 0..n {
            let top = ux[j] + k2 * psi[j] * (ibu[j] - ipv[j]);
            let bottom = vx[j] + k2 * psibar[j] * (ipv[j] - ibu[j]);
            out.upper[j] = I * top;
            out.lower[j] = -I * bottom;
        }
        Ok(out)
    }

    /// `R^n d`.
    pub fn power(&self, n: u32, d: &Doublet) -> Result<Doublet> {
        let mut cur = d.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// `R (psi, psibar)` for the field itself.
pub fn recursion_apply(f: &GridField, kappa: f64) -> Result<GridField> {
    let r = Recursion::new(f, kappa)?;
    f.with_doublet(r.apply(&f.doublet())?)
}

/// `(psi_t, psibar_t)` of the `N`-th flow.
pub fn hierarchy_rhs(n: u32, f: &GridField, kappa: f64) -> Result<Doublet> {
    if !(1..=4).contains(&n) {
        return Err(Error::domain(format!("flow index N = {n} outside 1..=4")));
    }
    let r = Recursion::new(f, kappa)?;
    Ok(r.power(n, &f.doublet())?.inv_i_sigma3())
}

/// `psi_t` of flows `N = 2, 3, 4` in their local (integral-free) form:
///
/// ```text
/// N=2  i (psi_xx + 2k^2 |psi|^2 psi)
/// N=3  -(psi_xxx + 6k^2 |psi|^2 psi_x)
/// N=4  -i (psi_xxxx + 2k^2 (2 psi_x psibar_x psi + 4 |psi|^2 psi_xx + psibar_xx psi^2
///          + 3 psibar psi_x^2) + 6k^4 |psi|^4 psi)
/// ```
pub fn explicit_flow(n: u32, f: &GridField, kappa: f64) -> Result<Vec<C64>> {
    if !(2..=4).contains(&n) {
        return Err(Error::domain(format!(
            "explicit flow N = {n} outside 2..=4"
        )));
    }
    let g = SpectralGrid::for_field(f)?;
    let (p, pb) = (&f.psi, &f.psibar);
    let d1 = g.derivative(p);
    let d2 = g.derivative(&d1);
    let k2 = kappa * kappa;
    let out = match n {
        2 => (0..f.len())
            .map(|j| I * (d2[j] + 2.0 * k2 * p[j] * pb[j] * p[j]))
            .collect(),
        3 => {
            let d3 = g.derivative(&d2);
            (0..f.len())
                .map(|j| -(d3[j] + 6.0 * k2 * p[j] * pb[j] * d1[j]))
                .collect()
        }
        _ => {
            let d4 = g.derivative(&g.derivative(&d2));
            let b1 = g.derivative(pb);
            let b2 = g.derivative(&b1);
            (0..f.len())
                .map(|j| {
                    let rho = p[j] * pb[j];
                    let rhs = d4[j]
                        + 2.0
                            * k2
                            * (2.0 * d1[j] * b1[j] * p[j]
                                + 4.0 * rho * d2[j]
                                + b2[j] * p[j] * p[j]
                                + 3.0 * pb[j] * d1[j] * d1[j])
                        + 6.0 * k2 * k2 * rho * rho * p[j];
                    -I * rhs
                })
                .collect()
        }
    };
    Ok(out)
}

/// Second-order truncation in `lambda` of the q-NLS flow:
/// `[(hbar^2/2m) R^2 + (lambda^2/6)(-(hbar^2/2m) R^2 + (hbar^6/(2m)^3) R^6)] (psi, psibar)`,
/// then `(i sigma_3)^{-1}`.
pub fn qnls_rhs_order2(
    f: &GridField,
    kappa: f64,
    lambda: f64,
    hbar: f64,
    m: f64,
) -> Result<Doublet> {
    if !(m > 0.0 && hbar > 0.0) {
        return Err(Error::domain("q-NLS needs m > 0 and hbar > 0"));
    }
    let r = Recursion::new(f, kappa)?;
    let r2 = r.power(2, &f.doublet())?;
    let r6 = r.power(4, &r2)?;
    let c2 = hbar * hbar / (2.0 * m);
    let c6 = (hbar * hbar / (2.0 * m)).powi(3);
    let l2 = lambda * lambda / 6.0;
    let out = r2
        .scale(C64::new(c2 * (1.0 - l2), 0.0))
        .axpy(C64::new(l2 * c6, 0.0), &r6);
    Ok(out.inv_i_sigma3())
}

/// One-soliton of `i psi_t + psi_xx + 2 kappa^2 |psi|^2 psi = 0`:
/// `(a/kappa) sech(a (x - 2bt - x0)) exp(i (b x + (a^2 - b^2) t + phase))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Soliton {
    pub a: f64,
    pub b: f64,
    pub x0: f64,
    pub phase: f64,
    pub kappa: f64,
}

impl Soliton {
    pub fn new(a: f64, b: f64, x0: f64, phase: f64, kappa: f64) -> Result<Self> {
        if !(a > 0.0 && kappa > 0.0) {
            return Err(Error::domain("soliton needs a > 0 and kappa > 0"));
        }
        Ok(Self {
            a,
            b,
            x0,
            phase,
            kappa,
        })
    }

    fn envelope(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let xi = x - 2.0 * self.b * t - self.x0;
        let amp = self.a / self.kappa / (self.a * xi).cosh();
        let theta = self.b * x + (self.a * self.a - self.b * self.b) * t + self.phase;
        (amp, theta, (self.a * xi).tanh())
    }

    pub fn value(&self, x: f64, t: f64) -> C64 {
        let (amp, theta, _) = self.envelope(x, t);
        C64::from_polar(amp, theta)
    }

    /// Analytic `d psi / dt`.
    pub fn time_derivative_at(&self, x: f64, t: f64) -> C64 {
        let (amp, theta, tanh) = self.envelope(x, t);
        let damp = -self.a * tanh * amp; // d amp / d xi
        let c = C64::new(
            -2.0 * self.b * damp,
            (self.a * self.a - self.b * self.b) * amp,
        );
        c * C64::from_polar(1.0, theta)
    }

    pub fn field(&self, x0: f64, length: f64, n: usize, t: f64) -> Result<GridField> {
        GridField::sample(x0, length, n, |x| self.value(x, t))
    }

    /// `(psi_t, conj(psi_t))` on the grid of `f`.
    pub fn time_derivative(&self, f: &GridField, t: f64) -> Doublet {
        let upper: Vec<C64> = f
            .xs()
            .iter()
            .map(|&x| self.time_derivative_at(x, t))
            .collect();
        let lower = upper.iter().map(|z| z.conj()).collect();
        Doublet { upper, lower }
    }
}

/// `max |i psi_t + psi_xx + 2 kappa^2 |psi|^2 psi|` with spectral `psi_xx`.
pub fn nls_residual(f: &GridField, psi_t: &[C64], kappa: f64) -> Result<f64> {
    if psi_t.len() != f.len() {
        return Err(Error::domain("psi_t length does not match the grid"));
    }
    let g = SpectralGrid::for_field(f)?;
    let pxx = g.derivative(&g.derivative(&f.psi));
    let k2 = 2.0 * kappa * kappa;
    Ok((0..f.len())
        .map(|j| {
            let p = f.psi[j];
            (I * psi_t[j] + pxx[j] + k2 * (p * f.psibar[j]) * p).norm()
        })
        .fold(0.0, f64::max))
}

/// `int psi psibar dx` (the rectangle rule is spectrally accurate for decaying fields).
pub fn mass(f: &GridField) -> f64 {
    f.psi
        .iter()
        .zip(&f.psibar)
        .map(|(a, b)| (a * b).re)
        .sum::<f64>()
        * f.dx
}

/// One classical RK4 step of the `N = 2` flow.
pub fn rk4_step(f: &GridField, dt: f64, kappa: f64) -> Result<GridField> {
    let h = C64::new(dt, 0.0);
    let k1 = hierarchy_rhs(2, f, kappa)?;
    let f2 = f.with_doublet(f.doublet().axpy(h * 0.5, &k1))?;
    let k2 = hierarchy_rhs(2, &f2, kappa)?;
    let f3 = f.with_doublet(f.doublet().axpy(h * 0.5, &k2))?;
    let k3 = hierarchy_rhs(2, &f3, kappa)?;
    let f4 = f.with_doublet(f.doublet().axpy(h, &k3))?;
    let k4 = hierarchy_rhs(2, &f4, kappa)?;
    let next = f
        .doublet()
        .axpy(h / 6.0, &k1)
        .axpy(h / 3.0, &k2)
        .axpy(h / 3.0, &k3)
        .axpy(h / 6.0, &k4);
    f.with_doublet(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nls::grid::{DEFAULT_LENGTH, DEFAULT_POINTS, DEFAULT_X0};

    fn soliton_field(t: f64) -> (Soliton, GridField) {
        let s = Soliton::new(1.5, 0.3, 0.5, 0.2, 1.0).unwrap();
        (
            s,
            s.field(DEFAULT_X0, DEFAULT_LENGTH, DEFAULT_POINTS, t)
                .unwrap(),
        )
    }

    fn gaussian(n: usize) -> GridField {
        GridField::sample(-20.0, 40.0, n, |x| {
            C64::from_polar((-x * x / 2.0).exp(), 0.7 * x)
        })
        .unwrap()
    }

    #[test]
    fn linear_recursion_is_momentum() {
        let f = gaussian(512);
        let g = SpectralGrid::for_field(&f).unwrap();
        let r = recursion_apply(&f, 0.0).unwrap();
        let dpsi = g.derivative(&f.psi);
        let dbar = g.derivative(&f.psibar);
        for j in 0..f.len() {
            assert!((r.psi[j] - I * dpsi[j]).norm() < 1e-12);
            assert!((r.psibar[j] + I * dbar[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn twice_linear_is_minus_second_derivative() {
        let f = GridField::sample(-20.0, 40.0, 1024, |x| C64::new((-x * x).exp(), 0.0)).unwrap();
        let rec = Recursion::new(&f, 0.0).unwrap();
        let r2 = rec.power(2, &f.doublet()).unwrap();
        for (j, x) in f.xs().into_iter().enumerate() {
            let pxx = (4.0 * x * x - 2.0) * (-x * x).exp();
            assert!((r2.upper[j] + pxx).norm() < 1e-8);
            assert!((r2.lower[j] + pxx).norm() < 1e-8);
        }
    }

    #[test]
    fn first_flow_is_translation() {
        let (_, f) = soliton_field(0.0);
        let rhs = hierarchy_rhs(1, &f, 1.0).unwrap();
        let d = SpectralGrid::for_field(&f).unwrap().derivative(&f.psi);
        assert!(rhs
            .upper
            .iter()
            .zip(&d)
            .all(|(a, b)| (a - b).norm() < 1e-10));
    }

    #[test]
    fn soliton_residual_and_mass() {
        let (s, f) = soliton_field(0.7);
        let pt = s.time_derivative(&f, 0.7);
        assert!(nls_residual(&f, &pt.upper, 1.0).unwrap() < 1e-7);
        let m0 = mass(
            &s.field(DEFAULT_X0, DEFAULT_LENGTH, DEFAULT_POINTS, 0.0)
                .unwrap(),
        );
        let m1 = mass(&f);
        assert!((m0 - m1).abs() < 1e-9 * m0);
        assert!((m0 - 3.0).abs() < 1e-9);
    }

    #[test]
    fn stationary_soliton_phase() {
        let s = Soliton::new(1.2, 0.0, 0.0, 0.4, 2.0).unwrap();
        for x in [-1.0, 0.0, 2.5] {
            let z = s.value(x, 0.0);
            assert!((z.arg() - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn hierarchy_matches_explicit_flows() {
        let (_, f) = soliton_field(0.0);
        for (n, tol) in [(2, 1e-7), (3, 1e-7), (4, 1e-6)] {
            let r = hierarchy_rhs(n, &f, 1.0).unwrap();
            let e = explicit_flow(n, &f, 1.0).unwrap();
            let err = r
                .upper
                .iter()
                .zip(&e)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < tol, "N={n} {err}");
        }
        assert!(explicit_flow(1, &f, 1.0).is_err());
    }

    #[test]
    fn weak_coupling_is_linear_hierarchy() {
        let f = gaussian(1024);
        let g = SpectralGrid::for_field(&f).unwrap();
        for n in 1..=4u32 {
            let rhs = hierarchy_rhs(n, &f, 1e-8).unwrap();
            let lin = g.multiply(&f.psi, |k| {
                // i psi_t = i^n d^n psi  =>  psi_t = i^(n-1) (ik)^n psi
                I.powu(n - 1) * (I * k).powu(n)
            });
            let scale = lin.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err = rhs
                .upper
                .iter()
                .zip(&lin)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-6 * scale, "N={n}: {err}");
        }
    }

    #[test]
    fn qnls_limits() {
        let f = gaussian(256);
        let (hbar, m) = (1.0, 0.5);
        let base = hierarchy_rhs(2, &f, 0.8).unwrap();
        let q0 = qnls_rhs_order2(&f, 0.8, 0.0, hbar, m).unwrap();
        let c = hbar * hbar / (2.0 * m);
        assert!(q0
            .upper
            .iter()
            .zip(&base.upper)
            .all(|(a, b)| (a - c * b).norm() < 1e-12));

        let plus = qnls_rhs_order2(&f, 0.8, 0.4, hbar, m).unwrap();
        let minus = qnls_rhs_order2(&f, 0.8, -0.4, hbar, m).unwrap();
        assert_eq!(plus, minus);

        // kappa = 0: Fourier multiplier; R0^2 -> k^2 on both components
        let lambda: f64 = 0.4;
        let g = SpectralGrid::for_field(&f).unwrap();
        let q = qnls_rhs_order2(&f, 0.0, lambda, hbar, m).unwrap();
        let l2 = lambda * lambda / 6.0;
        let mult = |k: f64| {
            let k2 = k * k;
            -I * (c * k2 + l2 * (-c * k2 + c.powi(3) * k2.powi(3)))
        };
        let lin = g.multiply(&f.psi, mult);
        let scale = lin.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let err = q
            .upper
            .iter()
            .zip(&lin)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9 * scale, "{err}");
    }

    #[test]
    fn decay_guard() {
        let f = GridField::sample(-5.0, 10.0, 64, |x| C64::new(1.0 / x.cosh(), 0.0)).unwrap();
        assert!(matches!(
            recursion_apply(&f, 1.0),
            Err(Error::DecayViolation { .. })
        ));
        assert!(hierarchy_rhs(5, &gaussian(64), 1.0).is_err());
    }

    #[test]
    fn rk4_conserves_mass() {
        let (_, f) = soliton_field(0.0);
        let m0 = mass(&f);
        let f1 = rk4_step(&f, 1e-3, 1.0).unwrap();
        assert!((mass(&f1) - m0).abs() < 1e-9 * m0);
    }

    #[test]
    fn refinement_reduces_residual() {
        let s = Soliton::new(1.0, 0.3, 0.0, 0.0, 1.0).unwrap();
        let res = |n| {
            let f = s.field(-20.0, 40.0, n, 0.0).unwrap();
            nls_residual(&f, &s.time_derivative(&f, 0.0).upper, 1.0).unwrap()
        };
        let (coarse, fine) = (res(128), res(256));
        assert!(fine * 4.0 <= coarse, "{coarse} -> {fine}");
    }
}
