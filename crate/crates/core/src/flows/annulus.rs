//! A point vortex in the annulus as a nonlinear oscillator.
//!
//! With `J = |z0|^2` and `Q = r2^2 / r1^2` the motion is circular,
//! `dz/dt = -i omega(J) z`, where
//! `omega(J) = Gamma / (2 pi (Q-1) J) [Ln_Q(1 - J/r1^2) - Ln_Q(1 - r2^2/J)]`, and
//! `H(J) = (Gamma^2 / 4 pi) ln |e_Q(J/((1-Q) r1^2)) e_Q(r2^2/((1-Q) J))|`.
//! The bracket `{theta, J} = 2/Gamma` makes `J_c = Gamma J / 2` the canonical action,
//! so `omega = dH/dJ_c`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use super::theorems::AnnulusSpec;
use crate::oscillators::SpectrumTable;
use crate::qcalc::{q_exp, q_log1m, SeriesControl};
use crate::{Error, Result, C64};

/// Vortex position and circulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VortexState {
    pub z0: C64,
    pub gamma: f64,
}

/// Default wall margin as a fraction of `r2^2 - r1^2`.
pub const MARGIN_FRACTION: f64 = 1e-3;

fn margin(spec: &AnnulusSpec) -> f64 {
    MARGIN_FRACTION * (spec.r2 * spec.r2 - spec.r1 * spec.r1)
}

fn check_action(j: f64, spec: &AnnulusSpec) -> Result<()> {
    let (lo, hi) = (spec.r1 * spec.r1, spec.r2 * spec.r2);
    let eps = margin(spec);
    if j > lo + eps && j < hi - eps {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "action J = {j} outside the annulus window ({}, {})",
            lo + eps,
            hi - eps
        )))
    }
}

/// Canonical action `Gamma J / 2`.
pub fn canonical_action(j: f64, gamma: f64) -> f64 {
    0.5 * gamma * j
}

pub fn annulus_omega(j: f64, gamma: f64, spec: &AnnulusSpec, ctl: &SeriesControl) -> Result<f64> {
    check_action(j, spec)?;
    let q = spec.q();
    let inner = q_log1m(C64::new(j / (spec.r1 * spec.r1), 0.0), q, ctl)?;
    let outer = q_log1m(C64::new(spec.r2 * spec.r2 / j, 0.0), q, ctl)?;
    Ok(gamma / (2.0 * PI * (q - 1.0) * j) * (inner - outer).re)
}

/// `|e_Q(..) e_Q(..)|` below this is treated as an image collision.
pub const SINGULAR_H_TOL: f64 = 1e-12;

pub fn annulus_hamiltonian(
    j: f64,
    gamma: f64,
    spec: &AnnulusSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_action(j, spec)?;
    let q = spec.q();
    let a = q_exp(C64::new(j / ((1.0 - q) * spec.r1 * spec.r1), 0.0), q, ctl)?;
    let b = q_exp(C64::new(spec.r2 * spec.r2 / ((1.0 - q) * j), 0.0), q, ctl)?;
    let p = (a * b).norm();
    if p < SINGULAR_H_TOL {
        return Err(Error::SingularH { action: j });
    }
    Ok(gamma * gamma / (4.0 * PI) * p.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub z: C64,
    pub j: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    /// `max | |z(t)| - |z0| | / |z0|`.
    pub radius_drift: f64,
    /// `max |H(t) - H(0)|`.
    pub energy_drift: f64,
    /// `omega(J0)` from the closed form.
    pub omega: f64,
    /// `2 pi / |omega(J0)|`.
    pub period_closed_form: f64,
    /// `2 pi T / |unwrapped angle|` over the simulated span.
    pub period_measured: f64,
}

/// RK4 on `dz/dt = -i omega(|z|^2) z`, recording every `stride`-th step.
pub fn vortex_simulate(
    state: VortexState,
    spec: &AnnulusSpec,
    dt: f64,
    steps: usize,
    stride: usize,
    ctl: &SeriesControl,
) -> Result<Trajectory> {
    if !(dt > 0.0) || steps == 0 {
        return Err(Error::domain(
            "simulation needs dt > 0 and at least one step",
        ));
    }
    let j0 = state.z0.norm_sqr();
    let omega0 = annulus_omega(j0, state.gamma, spec, ctl)?;
    if dt * omega0.abs() >= 0.1 {
        return Err(Error::domain(format!(
            "step too large: dt |omega| = {} must stay below 0.1",
            dt * omega0.abs()
        )));
    }
    let rhs = |z: C64| -> Result<C64> {
        let w = annulus_omega(z.norm_sqr(), state.gamma, spec, ctl)?;
        Ok(C64::new(0.0, -w) * z)
    };
    let h0 = annulus_hamiltonian(j0, state.gamma, spec, ctl)?;
    let r0 = state.z0.norm();
    let stride = stride.max(1);
    let mut points = vec![TrajectoryPoint {
        t: 0.0,
        z: state.z0,
        j: j0,
        h: h0,
    }];
    let (mut z, mut angle) = (state.z0, 0.0_f64);
    let (mut radius_drift, mut energy_drift) = (0.0_f64, 0.0_f64);
    for step in 1..=steps {
        let k1 = rhs(z)?;
        let k2 = rhs(z + k1 * (0.5 * dt))?;
        let k3 = rhs(z + k2 * (0.5 * dt))?;
        let k4 = rhs(z + k3 * dt)?;
        let next = z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        angle += (next / z).arg();
        z = next;
        let j = z.norm_sqr();
        check_action(j, spec)?;
        radius_drift = radius_drift.max((z.norm() - r0).abs() / r0);
        if step % stride == 0 || step == steps {
            let h = annulus_hamiltonian(j, state.gamma, spec, ctl)?;
            energy_drift = energy_drift.max((h - h0).abs());
            points.push(TrajectoryPoint {
                t: step as f64 * dt,
                z,
                j,
                h,
            });
        }
    }
    let span = steps as f64 * dt;
    Ok(Trajectory {
        points,
        radius_drift,
        energy_drift,
        omega: omega0,
        period_closed_form: 2.0 * PI / omega0.abs(),
        period_measured: 2.0 * PI * span / angle.abs(),
    })
}

/// `z_f = sqrt(H(J) / J) z0`.
pub fn annulus_f_transform(
    z0: C64,
    gamma: f64,
    spec: &AnnulusSpec,
    ctl: &SeriesControl,
) -> Result<C64> {
    let j = z0.norm_sqr();
    let h = annulus_hamiltonian(j, gamma, spec, ctl)?;
    if h < 0.0 {
        return Err(Error::NegativeH {
            action: j,
            value: h,
        });
    }
    Ok(z0 * (h / j).sqrt())
}

fn spectrum_params(gamma: f64, spec: &AnnulusSpec, action_scale: f64) -> BTreeMap<String, f64> {
    let mut p = BTreeMap::new();
    p.insert("gamma".into(), gamma);
    p.insert("r1".into(), spec.r1);
    p.insert("r2".into(), spec.r2);
    p.insert("action_scale".into(), action_scale);
    p
}

fn check_levels(n_min: u64, n_max: u64, action_scale: f64) -> Result<()> {
    if n_min > n_max {
        return Err(Error::domain(format!(
            "empty level range {n_min}..={n_max}"
        )));
    }
    if !(action_scale > 0.0) {
        return Err(Error::domain("action scale must be positive"));
    }
    Ok(())
}

/// Semiclassical levels `E_n = H(s (n + 1/2))` for `n_min..=n_max`, `s` the action scale.
pub fn annulus_bohr_sommerfeld(
    (n_min, n_max): (u64, u64),
    gamma: f64,
    spec: &AnnulusSpec,
    action_scale: f64,
    ctl: &SeriesControl,
) -> Result<SpectrumTable> {
    check_levels(n_min, n_max, action_scale)?;
    let energies = (n_min..=n_max)
        .map(|n| annulus_hamiltonian(action_scale * (n as f64 + 0.5), gamma, spec, ctl))
        .collect::<Result<_>>()?;
    Ok(SpectrumTable::build(
        "annulus_bs",
        "E_n = H(s (n+1/2))",
        spectrum_params(gamma, spec, action_scale),
        n_min,
        energies,
    ))
}

/// f-oscillator levels `E_n = (H(s n) + H(s (n+1))) / 2`.
pub fn annulus_f_spectrum(
    (n_min, n_max): (u64, u64),
    gamma: f64,
    spec: &AnnulusSpec,
    action_scale: f64,
    ctl: &SeriesControl,
) -> Result<SpectrumTable> {
    check_levels(n_min, n_max, action_scale)?;
    let h: Vec<f64> = (n_min..=n_max + 1)
        .map(|n| annulus_hamiltonian(action_scale * n as f64, gamma, spec, ctl))
        .collect::<Result<_>>()?;
    let energies = h.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Ok(SpectrumTable::build(
        "annulus_f",
        "E_n = (H(s n) + H(s (n+1)))/2",
        spectrum_params(gamma, spec, action_scale),
        n_min,
        energies,
    ))
}

/// Largest `n_min..=n_max` whose actions all fall inside the annulus window.
///
/// `offset` is `0.5` for Bohr-Sommerfeld levels (`J = s(n + 1/2)`) and `0` for
/// f-oscillator levels, which also need `J = s(n + 1)`.
pub fn annulus_level_window(
    spec: &AnnulusSpec,
    action_scale: f64,
    bohr_sommerfeld: bool,
) -> Option<(u64, u64)> {
    let eps = margin(spec);
    let (lo, hi) = (spec.r1 * spec.r1 + eps, spec.r2 * spec.r2 - eps);
    let (offset, extra) = if bohr_sommerfeld {
        (0.5, 0.0)
    } else {
        (0.0, 1.0)
    };
    let n_min = ((lo / action_scale - offset).floor() + 1.0).max(0.0);
    let n_max = (hi / action_scale - offset - extra).ceil() - 1.0;
    (n_max >= n_min).then_some((n_min as u64, n_max as u64))
}
