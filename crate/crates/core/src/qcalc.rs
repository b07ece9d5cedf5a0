//! q-numbers, q-factorials, Jackson q-exponential and q-logarithm, q-derivatives,
//! and the Fibonacci (golden ratio) counterparts.
//!
//! Two deformations appear side by side. The non-symmetric q-number
//! `[n] = 1 + q + ... + q^(n-1)` drives the Jackson exponential `e_q` and the
//! q-logarithm `Ln_q`; the symmetric q-number `sinh(lambda n) / sinh(lambda)`
//! with `q = e^lambda` drives the q-oscillator spectrum. Fibonacci numbers are
//! the two-base q-numbers with bases `phi` and `-1/phi`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result, C64};

/// Golden ratio `(1 + sqrt 5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Conjugate golden root `-1/phi`.
pub const PHI_CONJ: f64 = -0.618_033_988_749_894_9;

/// Flavour of a deformation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QKind {
    /// `q = e^lambda`, real and positive.
    RealQ,
    /// `q = e^(i pi / n)`, primitive `2n`-th root of unity.
    RootOfUnity(u32),
}

/// Deformation data.
///
/// For [`QKind::RootOfUnity`] the stored `lambda` is the wedge half-angle
/// `pi / n`, so that `q = e^(i lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParameter {
    lambda: f64,
    q: C64,
    kind: QKind,
}

impl QParameter {
    pub fn real(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::domain("deformation lambda must be finite"));
        }
        Ok(Self {
            lambda,
            q: C64::new(lambda.exp(), 0.0),
            kind: QKind::RealQ,
        })
    }

    pub fn root_of_unity(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("root of unity order must be positive"));
        }
        let angle = PI / f64::from(n);
        Ok(Self {
            lambda: angle,
            q: C64::from_polar(1.0, angle),
            kind: QKind::RootOfUnity(n),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn kind(&self) -> QKind {
        self.kind
    }

    /// The real base, when there is one.
    pub fn q_real(&self) -> Option<f64> {
        match self.kind {
            QKind::RealQ => Some(self.q.re),
            QKind::RootOfUnity(_) => None,
        }
    }
}

/// Truncation policy for the infinite series in this module.
///
/// A series stops at the first term whose magnitude is below `tol` provided the
/// following term is not larger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_terms: 512,
        }
    }
}

/// Environment variable that overrides [`SeriesControl::max_terms`].
pub const MAX_TERMS_ENV: &str = "QOSC_MAX_TERMS";

impl SeriesControl {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::domain("series tolerance must be positive"));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Self { tol, max_terms })
    }

    pub fn with_tol(tol: f64) -> Result<Self> {
        Self::new(tol, Self::default().max_terms)
    }

    /// Defaults, with `max_terms` taken from `QOSC_MAX_TERMS` when it parses.
    pub fn from_env() -> Self {
        let mut ctl = Self::default();
        if let Some(n) = std::env::var(MAX_TERMS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            ctl.max_terms = n;
        }
        ctl
    }

    /// Sums `term(0) + term(1) + ...`; `term` is called once per index, in order.
    fn sum<F>(&self, mut term: F) -> Result<C64>
    where
        F: FnMut(usize) -> C64,
    {
        let mut acc = C64::new(0.0, 0.0);
        let mut current = term(0);
        for n in 0..self.max_terms {
            let next = term(n + 1);
            acc += current;
            if current.norm() < self.tol && next.norm() <= current.norm() {
                return Ok(acc);
            }
            current = next;
        }
        Err(Error::NoConvergence {
            terms: self.max_terms,
            last_term: current.norm(),
        })
    }
}

/// Non-symmetric q-number `[n] = (q^n - 1) / (q - 1)`; exactly `n` at `q = 1`.
pub fn q_number(n: u32, q: f64) -> f64 {
    if q == 1.0 {
        return f64::from(n);
    }
    (q.powi(n as i32) - 1.0) / (q - 1.0)
}

/// Symmetric q-number `sinh(lambda n) / sinh(lambda)`; exactly `n` at `lambda = 0`.
pub fn sym_q_number(n: u32, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return f64::from(n);
    }
    (lambda * f64::from(n)).sinh() / lambda.sinh()
}

/// `[n]! = [1][2]...[n]`, with `[0]! = 1`.
pub fn q_factorial(n: u32, q: f64) -> f64 {
    (1..=n).map(|k| q_number(k, q)).product()
}

pub fn sym_q_factorial(n: u32, lambda: f64) -> f64 {
    (1..=n).map(|k| sym_q_number(k, lambda)).product()
}

/// `lambda / sinh(lambda)`, continuous through `lambda = 0`.
pub fn lambda_over_sinh(lambda: f64) -> f64 {
    if lambda == 0.0 {
        1.0
    } else {
        lambda / lambda.sinh()
    }
}

/// Jackson q-exponential `e_q(z) = sum z^n / [n]!`, entire for `q > 1`.
pub fn q_exp(z: C64, q: f64, ctl: &SeriesControl) -> Result<C64> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("q-exponential needs q > 0, got {q}")));
    }
    let mut term = C64::new(1.0, 0.0);
    ctl.sum(|n| {
        if n > 0 {
            term = term * z / q_number(n as u32, q);
        }
        term
    })
}

/// q-logarithm `Ln_q(1 - x) = -sum_{n>=1} x^n / [n]` for `|x| < q`, `q > 1`.
///
/// Close to the edge of the disc the power series converges slowly, so for
/// `|x| > q/2` the equivalent Lambert form
/// `-(q - 1) sum_{k>=1} x / (q^k - x)` is used instead.
pub fn q_log1m(x: C64, q: f64, ctl: &SeriesControl) -> Result<C64> {
    if !(q > 1.0) {
        return Err(Error::domain(format!("q-logarithm needs q > 1, got {q}")));
    }
    if x.norm() >= q {
        return Err(Error::domain(format!(
            "q-logarithm argument |x| = {} must be below q = {q}",
            x.norm()
        )));
    }
    if x.norm() <= 0.5 * q {
        q_log1m_power(x, q, ctl)
    } else {
        q_log1m_lambert(x, q, ctl)
    }
}

/// Direct power series for [`q_log1m`].
pub fn q_log1m_power(x: C64, q: f64, ctl: &SeriesControl) -> Result<C64> {
    let mut power = C64::new(1.0, 0.0);
    let s = ctl.sum(|n| {
        if n == 0 {
            return C64::new(0.0, 0.0);
        }
        power *= x;
        power / q_number(n as u32, q)
    })?;
    Ok(-s)
}

/// Lambert-series form of [`q_log1m`]; geometric convergence with ratio `1/q`.
pub fn q_log1m_lambert(x: C64, q: f64, ctl: &SeriesControl) -> Result<C64> {
    let mut qk = 1.0;
    let s = ctl.sum(|_| {
        qk *= q;
        x / (qk - x)
    })?;
    Ok(-(q - 1.0) * s)
}

/// q-harmonic series `H(q) = sum_{n>=1} 1/[n] = -Ln_q(0)`, convergent for `q > 1`.
pub fn q_harmonic(q: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::domain(format!(
            "q-harmonic series needs q > 1, got {q}"
        )));
    }
    let s = ctl.sum(|n| C64::new(1.0 / q_number(n as u32 + 1, q), 0.0))?;
    Ok(s.re)
}

/// Jackson q-derivative `(f(qz) - f(z)) / ((q - 1) z)`.
pub fn q_derivative<F>(f: F, z: C64, q: C64) -> Result<C64>
where
    F: Fn(C64) -> C64,
{
    if z == C64::new(0.0, 0.0) {
        return Err(Error::domain("q-derivative is undefined at z = 0"));
    }
    if q == C64::new(1.0, 0.0) {
        return Err(Error::domain("q-derivative needs q != 1"));
    }
    Ok((f(q * z) - f(z)) / ((q - 1.0) * z))
}

/// Exact Fibonacci number by fast doubling.
pub fn fibonacci(n: u64) -> BigUint {
    fib_pair(n).0
}

/// `(F_n, F_{n+1})` via `F_2k = F_k (2 F_{k+1} - F_k)`, `F_{2k+1} = F_k^2 + F_{k+1}^2`.
fn fib_pair(n: u64) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    for bit in (0..64 - n.leading_zeros()).rev() {
        let two_b_minus_a = (&b << 1u32) - &a;
        let c = &a * &two_b_minus_a;
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            a = d.clone();
            b = c + d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// Floating Binet formula `(phi^n - phi'^n) / (phi - phi')`. Cross-check only.
pub fn binet_float(n: u32) -> f64 {
    let n = n as i32;
    (PHI.powi(n) - PHI_CONJ.powi(n)) / (PHI - PHI_CONJ)
}

/// Fibonacci factorial `F_1 F_2 ... F_n`, with `F_0! = 1`.
pub fn fib_factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..n {
        acc *= &a;
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    acc
}

/// Fibonacci number as `f64` (exact up to `F_78`, rounded beyond).
pub fn fibonacci_f64(n: u64) -> f64 {
    fibonacci(n).to_f64().unwrap_or(f64::INFINITY)
}

/// Fibonacci exponential `e_F(z) = sum z^n / F_n!`.
pub fn fib_exp(z: C64, ctl: &SeriesControl) -> Result<C64> {
    let mut term = C64::new(1.0, 0.0);
    let (mut f_prev, mut f_cur) = (0.0_f64, 1.0_f64);
    ctl.sum(|n| {
        if n > 0 {
            term = term * z / f_cur;
            let next = f_prev + f_cur;
            f_prev = f_cur;
            f_cur = next;
        }
        term
    })
}

/// Binet-Fibonacci derivative `(f(phi z) - f(-z/phi)) / ((phi + 1/phi) z)`.
pub fn golden_derivative<F>(f: F, z: C64) -> Result<C64>
where
    F: Fn(C64) -> C64,
{
    if z == C64::new(0.0, 0.0) {
        return Err(Error::domain("golden derivative is undefined at z = 0"));
    }
    Ok((f(z * PHI) - f(z * PHI_CONJ)) / ((PHI - PHI_CONJ) * z))
}
