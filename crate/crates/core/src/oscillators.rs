//! Classical and quantum f-oscillators.
//!
//! Any one-degree-of-freedom integrable Hamiltonian written in action variables,
//! `H = H(J)`, becomes an oscillator `alpha_dot = -i omega(|alpha|^2) alpha` with
//! `omega = dH/dJ`. Rescaling `alpha_f = sqrt(H(J)/J) alpha` makes the Hamiltonian
//! quadratic; quantizing the rescaled operators gives `E_n = (H(n) + H(n+1)) / 2`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::qcalc::{fib_exp, fibonacci, fibonacci_f64, sym_q_number, SeriesControl, PHI};
use crate::{Error, Result, C64, I};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Energy as a function of the action, `H(J)`.
#[derive(Clone)]
pub struct HamiltonianProfile {
    name: String,
    params: BTreeMap<String, f64>,
    h: RealFn,
    dh: Option<RealFn>,
    domain: (f64, f64),
}

impl fmt::Debug for HamiltonianProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianProfile")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("domain", &self.domain)
            .field("analytic_frequency", &self.dh.is_some())
            .finish()
    }
}

impl HamiltonianProfile {
    /// Profile from an arbitrary `H(J)` on `J >= 0`; frequencies by finite differences.
    pub fn custom<F>(name: impl Into<String>, h: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            h: Arc::new(h),
            dh: None,
            domain: (0.0, f64::INFINITY),
        }
    }

    pub fn with_frequency<F>(mut self, dh: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.dh = Some(Arc::new(dh));
        self
    }

    /// Restrict the admissible actions to the closed interval `[lo, hi]`.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// `H = omega0 J`.
    pub fn linear(omega0: f64) -> Self {
        Self::custom("linear", move |j| omega0 * j)
            .with_frequency(move |_| omega0)
            .with_param("omega0", omega0)
    }

    /// `H = sinh(lambda J) / sinh(lambda)`.
    pub fn sym_q(lambda: f64) -> Self {
        let h = move |j: f64| {
            if lambda == 0.0 {
                j
            } else {
                (lambda * j).sinh() / lambda.sinh()
            }
        };
        let dh = move |j: f64| {
            if lambda == 0.0 {
                1.0
            } else {
                lambda / lambda.sinh() * (lambda * j).cosh()
            }
        };
        Self::custom("sym_q", h)
            .with_frequency(dh)
            .with_param("lambda", lambda)
    }

    /// `H = m c^2 sqrt(1 + 2 omega0 J / (m c^2))`.
    pub fn semi_relativistic(m: f64, c: f64, omega0: f64) -> Result<Self> {
        if !(m > 0.0 && c > 0.0 && omega0 > 0.0) {
            return Err(Error::domain(
                "semi-relativistic oscillator needs m, c, omega0 > 0",
            ));
        }
        let rest = m * c * c;
        Ok(Self::custom("semirel", move |j| {
            rest * (1.0 + 2.0 * omega0 * j / rest).sqrt()
        })
        .with_frequency(move |j| semi_relativistic_frequency(j, m, c, omega0).unwrap_or(f64::NAN))
        .with_param("m", m)
        .with_param("c", c)
        .with_param("omega0", omega0))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn contains(&self, j: f64) -> bool {
        j >= self.domain.0 && j <= self.domain.1
    }

    fn check(&self, j: f64) -> Result<()> {
        if self.contains(j) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "action J = {j} outside [{}, {}] for profile {}",
                self.domain.0, self.domain.1, self.name
            )))
        }
    }

    pub fn energy(&self, j: f64) -> Result<f64> {
        self.check(j)?;
        let e = (self.h)(j);
        if e.is_finite() {
            Ok(e)
        } else {
            Err(Error::domain(format!(
                "H({j}) is not finite for profile {}",
                self.name
            )))
        }
    }

    /// `omega(J) = dH/dJ`; central difference with step `1e-6 max(1, J)` when no
    /// analytic derivative was supplied.
    pub fn frequency(&self, j: f64) -> Result<f64> {
        self.check(j)?;
        let w = match &self.dh {
            Some(dh) => dh(j),
            None => {
                let step = 1e-6 * j.abs().max(1.0);
                let lo = (j - step).max(self.domain.0);
                let hi = (j + step).min(self.domain.1);
                ((self.h)(hi) - (self.h)(lo)) / (hi - lo)
            }
        };
        if w.is_finite() {
            Ok(w)
        } else {
            Err(Error::domain(format!("frequency undefined at J = {j}")))
        }
    }
}

/// Complex amplitude `alpha = i sqrt(J) e^(-i theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexAmplitude(pub C64);

impl ComplexAmplitude {
    pub fn from_action_angle(action: f64, angle: f64) -> Self {
        Self(I * action.sqrt() * C64::from_polar(1.0, -angle))
    }

    pub fn action(&self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn value(&self) -> C64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: u64,
    pub energy: f64,
}

/// Indexed energy levels with the metadata needed to reproduce them.
///
/// Level `k` of the table carries quantum number `first + k`; tables built from
/// the ground state have `first = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub model: String,
    pub formula: String,
    pub params: BTreeMap<String, f64>,
    pub levels: Vec<Level>,
}

impl SpectrumTable {
    pub(crate) fn build(
        model: &str,
        formula: &str,
        params: BTreeMap<String, f64>,
        first: u64,
        energies: Vec<f64>,
    ) -> Self {
        let levels = energies
            .into_iter()
            .enumerate()
            .map(|(k, energy)| Level {
                n: first + k as u64,
                energy,
            })
            .collect();
        Self {
            model: model.to_string(),
            formula: formula.to_string(),
            params,
            levels,
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn energy(&self, n: u64) -> Option<f64> {
        let first = self.levels.first()?.n;
        self.levels
            .get(n.checked_sub(first)? as usize)
            .map(|l| l.energy)
    }
}

/// `E_n = (H(n) + H(n+1)) / 2` for `n = 0..=n_max`.
pub fn f_spectrum(profile: &HamiltonianProfile, n_max: u64) -> Result<SpectrumTable> {
    let h: Vec<f64> = (0..=n_max + 1)
        .map(|n| profile.energy(n as f64))
        .collect::<Result<_>>()?;
    let energies = h.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Ok(SpectrumTable::build(
        profile.name(),
        "E_n = (H(n) + H(n+1))/2",
        profile.params().clone(),
        0,
        energies,
    ))
}

/// Symmetric q-oscillator levels `(1/2)([n] + [n+1]) = sinh((n + 1/2) lambda) / (2 sinh(lambda/2))`.
pub fn sym_q_spectrum(lambda: f64, n_max: u64) -> Result<SpectrumTable> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "sym_q spectrum needs lambda >= 0, got {lambda}"
        )));
    }
    let energies = (0..=n_max)
        .map(|n| {
            let n = n as u32;
            let sum_form = 0.5 * (sym_q_number(n, lambda) + sym_q_number(n + 1, lambda));
            let closed = sym_q_level_closed(n, lambda);
            debug_assert!(
                (sum_form - closed).abs() <= 1e-12 * closed.abs().max(1.0),
                "sym_q forms disagree at n={n}: {sum_form} vs {closed}"
            );
            closed
        })
        .collect();
    let mut params = BTreeMap::new();
    params.insert("lambda".to_string(), lambda);
    Ok(SpectrumTable::build(
        "sym_q",
        "E_n = sinh((n+1/2) lambda) / (2 sinh(lambda/2))",
        params,
        0,
        energies,
    ))
}

/// Closed form of the symmetric q-oscillator level.
pub fn sym_q_level_closed(n: u32, lambda: f64) -> f64 {
    let half = f64::from(n) + 0.5;
    if lambda == 0.0 {
        half
    } else {
        0.5 * (half * lambda).sinh() / (0.5 * lambda).sinh()
    }
}

/// `omega(J) = omega0 / sqrt(1 + 2 omega0 J / (m c^2))`.
pub fn semi_relativistic_frequency(j: f64, m: f64, c: f64, omega0: f64) -> Result<f64> {
    if j < 0.0 {
        return Err(Error::domain(format!("negative action J = {j}")));
    }
    if !(m > 0.0 && c > 0.0 && omega0 > 0.0) {
        return Err(Error::domain(
            "semi-relativistic oscillator needs m, c, omega0 > 0",
        ));
    }
    Ok(omega0 / (1.0 + 2.0 * omega0 * j / (m * c * c)).sqrt())
}

/// Which combination of neighbouring `H` values forms the semi-relativistic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SemiRelVariant {
    /// `(H(n) + H(n+1)) / 2`, the general f-oscillator spectrum.
    #[default]
    Sum,
    /// `(H(n+1) - H(n)) / 2`, kept only for comparison.
    Difference,
}

pub fn semi_relativistic_spectrum(
    m: f64,
    c: f64,
    omega0: f64,
    n_max: u64,
    variant: SemiRelVariant,
) -> Result<SpectrumTable> {
    let profile = HamiltonianProfile::semi_relativistic(m, c, omega0)?;
    match variant {
        SemiRelVariant::Sum => f_spectrum(&profile, n_max),
        SemiRelVariant::Difference => {
            let h: Vec<f64> = (0..=n_max + 1)
                .map(|n| profile.energy(n as f64))
                .collect::<Result<_>>()?;
            let energies = h.windows(2).map(|w| 0.5 * (w[1] - w[0])).collect();
            Ok(SpectrumTable::build(
                "semirel",
                "E_n = (H(n+1) - H(n))/2",
                profile.params().clone(),
                0,
                energies,
            ))
        }
    }
}

/// `alpha_f = sqrt(H(J)/J) alpha`, so that `|alpha_f|^2 = H(J)`.
pub fn f_transform(
    alpha: ComplexAmplitude,
    profile: &HamiltonianProfile,
) -> Result<ComplexAmplitude> {
    let j = alpha.action();
    if j == 0.0 {
        // H(J)/J has a finite limit only when H(0) = 0.
        let h0 = profile.energy(0.0)?;
        if h0 != 0.0 {
            return Err(Error::domain("H(J)/J diverges at J = 0 because H(0) != 0"));
        }
        profile.frequency(0.0)?;
        return Ok(ComplexAmplitude(C64::new(0.0, 0.0)));
    }
    let ratio = profile.energy(j)? / j;
    if ratio < 0.0 {
        return Err(Error::domain(format!(
            "H(J)/J = {ratio} < 0 has no real square root"
        )));
    }
    Ok(ComplexAmplitude(alpha.0 * ratio.sqrt()))
}

/// Exact classical flow `alpha(t) = alpha0 e^(-i omega(J0) t)`.
pub fn evolve_classical(
    alpha0: ComplexAmplitude,
    profile: &HamiltonianProfile,
    t: f64,
) -> Result<ComplexAmplitude> {
    let omega = profile.frequency(alpha0.action())?;
    Ok(ComplexAmplitude(
        alpha0.0 * C64::from_polar(1.0, -omega * t),
    ))
}

/// Exact integer form of the golden levels, `F_{n+2}`, so that `E_n = (hbar omega / 2) F_{n+2}`.
pub fn golden_levels_exact(n_max: u64) -> Vec<BigUint> {
    (0..=n_max).map(|n| fibonacci(n + 2)).collect()
}

/// Golden oscillator spectrum `E_n = (hbar omega / 2) F_{n+2}`.
pub fn golden_spectrum(n_max: u64, hbar_omega: f64) -> SpectrumTable {
    let energies = golden_levels_exact(n_max)
        .iter()
        .map(|f| 0.5 * hbar_omega * f.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mut params = BTreeMap::new();
    params.insert("hbar_omega".to_string(), hbar_omega);
    SpectrumTable::build(
        "golden",
        "E_n = (hbar omega/2) F_{n+2}",
        params,
        0,
        energies,
    )
}

/// Relative level spacing `(E_{n+1} - E_n) / E_n = F_{n+1} / F_{n+2}`.
pub fn golden_ratio_limit(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("golden ratio limit is indexed from n = 1"));
    }
    let num = fibonacci(n + 1);
    let den = fibonacci(n + 2);
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() => Ok(a / b),
        // beyond f64 range the ratio has long converged
        _ => Ok(1.0 / PHI),
    }
}

/// Truncated golden coherent state `|beta>` in the Fock basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentState {
    pub beta: C64,
    pub coeffs: Vec<C64>,
}

impl CoherentState {
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Coefficients of `b |beta>`: `(b c)_n = sqrt(F_{n+1}) c_{n+1}`.
    pub fn lowered(&self) -> Vec<C64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * fibonacci_f64(n as u64).sqrt())
            .collect()
    }

    /// `<self | other>` over the common truncation.
    pub fn overlap(&self, other: &CoherentState) -> C64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Golden coherent state `c_n = beta^n / sqrt(F_n!) c_0`, `|c_0|^2 = 1 / e_F(|beta|^2)`.
///
/// Fails with [`Error::NoConvergence`] unless `|beta|^(2(n_max+1)) / F_{n_max+1}! < tol`.
pub fn golden_coherent(beta: C64, n_max: usize, ctl: &SeriesControl) -> Result<CoherentState> {
    let b2 = beta.norm_sqr();
    let mut unnormalized = Vec::with_capacity(n_max + 1);
    let mut c = C64::new(1.0, 0.0);
    let mut weight = 1.0_f64; // |beta|^(2n) / F_n!
    let (mut f_prev, mut f_cur) = (0.0_f64, 1.0_f64); // F_n, F_{n+1}
    for n in 0..=n_max {
        if n > 0 {
            c = c * beta / f_prev.sqrt();
        }
        unnormalized.push(c);
        weight *= b2 / f_cur;
        let next = f_prev + f_cur;
        f_prev = f_cur;
        f_cur = next;
        if n == n_max && !(weight < ctl.tol) {
            return Err(Error::NoConvergence {
                terms: n_max + 1,
                last_term: weight,
            });
        }
    }
    let norm = fib_exp(C64::new(b2, 0.0), ctl)?.re;
    let scale = norm.sqrt().recip();
    Ok(CoherentState {
        beta,
        coeffs: unnormalized.into_iter().map(|c| c * scale).collect(),
    })
}

/// Closed-form overlap `e_F(conj(alpha) beta) / sqrt(e_F(|alpha|^2) e_F(|beta|^2))`.
pub fn golden_overlap(alpha: C64, beta: C64, ctl: &SeriesControl) -> Result<C64> {
    let cross = fib_exp(alpha.conj() * beta, ctl)?;
    let na = fib_exp(C64::new(alpha.norm_sqr(), 0.0), ctl)?.re;
    let nb = fib_exp(C64::new(beta.norm_sqr(), 0.0), ctl)?.re;
    Ok(cross / (na * nb).sqrt())
}
