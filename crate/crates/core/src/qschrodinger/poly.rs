//! Polynomials in `(x, t)` with complex coefficients and the operators that act on them.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::qcalc::lambda_over_sinh;
use crate::{Error, Result, C64, I};

/// Physical constants a polynomial was built with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyParams {
    pub hbar: f64,
    pub m: f64,
    pub lambda: f64,
}

/// `sum c_ij x^i t^j`, keyed by `(i, j)`. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarPolynomial {
    coeffs: BTreeMap<(u32, u32), C64>,
    pub params: PolyParams,
}

impl BivarPolynomial {
    pub fn zero(params: PolyParams) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            params,
        }
    }

    pub fn constant(c: C64, params: PolyParams) -> Self {
        Self::monomial(0, 0, c, params)
    }

    pub fn monomial(i: u32, j: u32, c: C64, params: PolyParams) -> Self {
        let mut p = Self::zero(params);
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms<I>(terms: I, params: PolyParams) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), C64)>,
    {
        let mut p = Self::zero(params);
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: C64) {
        let slot = self.coeffs.entry((i, j)).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> C64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or_default()
    }

    /// Terms in `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), C64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, _)| i).max()
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(_, j)| j).max()
    }

    /// Largest coefficient modulus; 0 for the zero polynomial.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * c)), self.params)
    }

    pub fn d_dx(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&((i, _), _)| i > 0)
                .map(|((i, j), c)| ((i - 1, j), c * f64::from(i))),
            self.params,
        )
    }

    pub fn d_dt(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&((_, j), _)| j > 0)
                .map(|((i, j), c)| ((i, j - 1), c * f64::from(j))),
            self.params,
        )
    }

    pub fn mul_x(&self) -> Self {
        Self::from_terms(self.terms().map(|((i, j), c)| ((i + 1, j), c)), self.params)
    }

    pub fn mul_t(&self) -> Self {
        Self::from_terms(self.terms().map(|((i, j), c)| ((i, j + 1), c)), self.params)
    }

    /// Coefficients in `x` at fixed `t`, lowest degree first.
    pub fn x_coefficients_at(&self, t: f64) -> Vec<C64> {
        let Some(d) = self.x_degree() else {
            return Vec::new();
        };
        let mut out = vec![C64::new(0.0, 0.0); d as usize + 1];
        for ((i, j), c) in self.terms() {
            out[i as usize] += c * t.powi(j as i32);
        }
        out
    }

    pub fn eval(&self, x: C64, t: f64) -> C64 {
        horner(&self.x_coefficients_at(t), x)
    }

    /// Largest coefficient of `self - other`, divided by `max(1, |self|, |other|)`.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        (self - other).max_abs() / scale
    }
}

pub(crate) fn horner(coeffs: &[C64], x: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

impl Add for &BivarPolynomial {
    type Output = BivarPolynomial;
    fn add(self, rhs: &BivarPolynomial) -> BivarPolynomial {
        let mut out = self.clone();
        for ((i, j), c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BivarPolynomial {
    type Output = BivarPolynomial;
    fn sub(self, rhs: &BivarPolynomial) -> BivarPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &BivarPolynomial {
    type Output = BivarPolynomial;
    fn neg(self) -> BivarPolynomial {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for &BivarPolynomial {
    type Output = BivarPolynomial;
    fn mul(self, rhs: C64) -> BivarPolynomial {
        self.scale(rhs)
    }
}

/// The free-particle operator `(1/sinh lambda) sinh(-lambda hbar^2/(2m) D^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionOperator {
    pub lambda: f64,
    pub hbar: f64,
    pub m: f64,
}

impl DispersionOperator {
    pub fn new(lambda: f64, hbar: f64, m: f64) -> Result<Self> {
        if !(m > 0.0 && hbar > 0.0) || !lambda.is_finite() || !m.is_finite() || !hbar.is_finite() {
            return Err(Error::domain(format!(
                "dispersion operator needs m > 0, hbar > 0 and finite lambda (m={m}, hbar={hbar}, lambda={lambda})"
            )));
        }
        Ok(Self { lambda, hbar, m })
    }

    pub fn params(&self) -> PolyParams {
        PolyParams {
            hbar: self.hbar,
            m: self.m,
            lambda: self.lambda,
        }
    }

    /// `-lambda hbar^2 / (2m)`, the coefficient of `D^2` inside sinh and cosh.
    pub fn inner(&self) -> f64 {
        -self.lambda * self.hbar * self.hbar / (2.0 * self.m)
    }

    /// Series of the Hamiltonian in powers of `D^2`.
    ///
    /// Written as `(-hbar^2/2m)^k lambda^(k-1) (lambda/sinh lambda) / k!` for odd `k`,
    /// which stays finite as `lambda -> 0`.
    pub fn hamiltonian_series(&self) -> D2Series {
        let base = -self.hbar * self.hbar / (2.0 * self.m);
        let (lambda, ls) = (self.lambda, lambda_over_sinh(self.lambda));
        D2Series::from_fn(move |k| {
            if k % 2 == 0 {
                return C64::new(0.0, 0.0);
            }
            let mut c = ls;
            for r in 1..=k {
                c *= base / r as f64;
                if r > 1 {
                    c *= lambda;
                }
            }
            C64::new(c, 0.0)
        })
    }

    /// `cosh(-lambda hbar^2/(2m) D^2)`.
    pub fn cosh_series(&self) -> D2Series {
        let a = self.inner();
        D2Series::from_fn(move |k| {
            if k % 2 == 1 {
                return C64::new(0.0, 0.0);
            }
            let mut c = 1.0;
            for r in 1..=k {
                c *= a / r as f64;
            }
            C64::new(c, 0.0)
        })
    }

    pub fn apply(&self, poly: &BivarPolynomial) -> BivarPolynomial {
        apply_d2_series(&self.hamiltonian_series(), poly)
    }
}

/// Power series `sum_k g_k (D^2)^k` in the second `x`-derivative.
pub struct D2Series {
    coeff: Box<dyn Fn(usize) -> C64 + Send + Sync>,
}

impl D2Series {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(usize) -> C64 + Send + Sync + 'static,
    {
        Self { coeff: Box::new(f) }
    }

    pub fn from_coeffs(c: Vec<C64>) -> Self {
        Self::from_fn(move |k| c.get(k).copied().unwrap_or_default())
    }

    pub fn coeff(&self, k: usize) -> C64 {
        (self.coeff)(k)
    }
}

/// `g(D^2) poly`, exact: terms beyond `D^(2 floor(d/2))` annihilate a degree-`d` polynomial.
pub fn apply_d2_series(g: &D2Series, poly: &BivarPolynomial) -> BivarPolynomial {
    let mut out = BivarPolynomial::zero(poly.params);
    let Some(d) = poly.x_degree() else {
        return out;
    };
    let mut dk = poly.clone();
    for k in 0..=(d / 2) as usize {
        let c = g.coeff(k);
        if c != C64::new(0.0, 0.0) {
            out = &out + &dk.scale(c);
        }
        dk = dk.d_dx().d_dx();
    }
    out
}

/// `exp(-(i t / hbar) H) x^n`, expanded exactly.
pub fn qkf_polynomial(n: u32, disp: &DispersionOperator) -> BivarPolynomial {
    let params = disp.params();
    let mut term = BivarPolynomial::monomial(n, 0, C64::new(1.0, 0.0), params);
    let mut out = term.clone();
    let step = -I / disp.hbar;
    for j in 1..=n / 2 + 1 {
        term = disp.apply(&term).mul_t().scale(step / f64::from(j));
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    out
}

/// Free Schrodinger polynomial `exp((i hbar t / 2m) D^2) x^n`, from its closed form.
pub fn schrodinger_polynomial(n: u32, hbar: f64, m: f64) -> BivarPolynomial {
    let params = PolyParams {
        hbar,
        m,
        lambda: 0.0,
    };
    let a = I * hbar / (2.0 * m);
    let mut p = BivarPolynomial::zero(params);
    // n! / (k! (n-2k)!) built incrementally
    let mut c = C64::new(1.0, 0.0);
    for k in 0..=n / 2 {
        if k > 0 {
            let top = f64::from(n - 2 * k + 2) * f64::from(n - 2 * k + 1);
            c = c * a * top / f64::from(k);
        }
        p.add_term(n - 2 * k, k, c);
    }
    p
}

/// Human-readable grouping of the boost operator.
pub const BOOST_GROUPING: &str =
    "K = x + (i hbar t / m) (lambda / sinh lambda) cosh(-lambda hbar^2 / (2 m) d^2/dx^2) d/dx";

/// Boost `K p = x p + (i hbar t/m)(lambda/sinh lambda) cosh(-lambda hbar^2/(2m) D^2) D p`.
pub fn boost_apply(poly: &BivarPolynomial, disp: &DispersionOperator) -> BivarPolynomial {
    let c = I * disp.hbar / disp.m * lambda_over_sinh(disp.lambda);
    let drift = apply_d2_series(&disp.cosh_series(), &poly.d_dx())
        .mul_t()
        .scale(c);
    &poly.mul_x() + &drift
}

/// `i hbar dp/dt - H p`.
pub fn schrodinger_residual(poly: &BivarPolynomial, disp: &DispersionOperator) -> BivarPolynomial {
    &poly.d_dt().scale(I * disp.hbar) - &disp.apply(poly)
}

/// `P0 = i hbar d/dt`.
pub fn p0(poly: &BivarPolynomial, disp: &DispersionOperator) -> BivarPolynomial {
    poly.d_dt().scale(I * disp.hbar)
}

/// `P1 = -i hbar d/dx`.
pub fn p1(poly: &BivarPolynomial, disp: &DispersionOperator) -> BivarPolynomial {
    poly.d_dx().scale(-I * disp.hbar)
}

/// Right-hand side of the `[P0, K]` relation:
/// `-(hbar^2/m)(lambda/sinh lambda) cosh(-lambda hbar^2/(2m) D^2) D p`,
/// equivalently `-i hbar (lambda/(m sinh lambda)) cosh(lambda P1^2/(2m)) P1 p`.
pub fn p0_k_rhs(poly: &BivarPolynomial, disp: &DispersionOperator) -> BivarPolynomial {
    let c = -disp.hbar * disp.hbar / disp.m * lambda_over_sinh(disp.lambda);
    apply_d2_series(&disp.cosh_series(), &poly.d_dx()).scale(C64::new(c, 0.0))
}

/// Residuals of the symmetry algebra on a set of test polynomials, each relative
/// to the largest coefficient among the terms that should cancel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorReport {
    /// `max |[P0, P1] p|`
    pub p0_p1: f64,
    /// `max |[P1, K] p + i hbar p|`
    pub p1_k: f64,
    /// `max |[P0, K] p - rhs(p)|`
    pub p0_k: f64,
    pub grouping: String,
    pub polynomials: usize,
}

impl CommutatorReport {
    pub fn max_residual(&self) -> f64 {
        self.p0_p1.max(self.p1_k).max(self.p0_k)
    }
}

pub fn symmetry_commutators(
    disp: &DispersionOperator,
    test_polys: &[BivarPolynomial],
) -> Result<CommutatorReport> {
    let mut report = CommutatorReport {
        p0_p1: 0.0,
        p1_k: 0.0,
        p0_k: 0.0,
        grouping: BOOST_GROUPING.to_string(),
        polynomials: test_polys.len(),
    };
    for p in test_polys {
        if p.x_degree().unwrap_or(0) > 10 {
            return Err(Error::domain(
                "commutator checks take polynomials of x-degree <= 10",
            ));
        }
        let k = |q: &BivarPolynomial| boost_apply(q, disp);
        // each residual is relative to the largest term that cancels in it
        let scale =
            |parts: &[&BivarPolynomial]| parts.iter().map(|q| q.max_abs()).fold(1.0, f64::max);

        let (a, b) = (p0(&p1(p, disp), disp), p1(&p0(p, disp), disp));
        report.p0_p1 = report.p0_p1.max((&a - &b).max_abs() / scale(&[&a, &b]));

        let (a, b, c) = (p1(&k(p), disp), k(&p1(p, disp)), p.scale(I * disp.hbar));
        report.p1_k = report
            .p1_k
            .max((&(&a - &b) + &c).max_abs() / scale(&[&a, &b, &c]));

        let (a, b, c) = (p0(&k(p), disp), k(&p0(p, disp)), p0_k_rhs(p, disp));
        report.p0_k = report
            .p0_k
            .max((&(&a - &b) - &c).max_abs() / scale(&[&a, &b, &c]));
    }
    Ok(report)
}

/// Monomials `x^i t^j` with `i + 2 j <= weight`.
pub fn monomial_basis(weight: u32, params: PolyParams) -> Vec<BivarPolynomial> {
    let mut out = Vec::new();
    for j in 0..=weight / 2 {
        for i in 0..=weight - 2 * j {
            out.push(BivarPolynomial::monomial(i, j, C64::new(1.0, 0.0), params));
        }
    }
    out
}

/// Closed forms of the first six polynomials as commonly tabulated, in terms of
/// `g = (hbar/m)(lambda/sinh lambda)`. Used only to cross-check the generated ones.
pub fn tabulated_qkf(n: u32, disp: &DispersionOperator) -> Option<BivarPolynomial> {
    let (hbar, m, lambda) = (disp.hbar, disp.m, disp.lambda);
    let g = hbar / m * lambda_over_sinh(lambda);
    let r = |v: f64| C64::new(v, 0.0);
    let i = |v: f64| C64::new(0.0, v);
    let terms: Vec<((u32, u32), C64)> = match n {
        0 => vec![((0, 0), r(1.0))],
        1 => vec![((1, 0), r(1.0))],
        2 => vec![((2, 0), r(1.0)), ((0, 1), i(g))],
        3 => vec![((3, 0), r(1.0)), ((1, 1), i(3.0 * g))],
        4 => vec![
            ((4, 0), r(1.0)),
            ((2, 1), i(6.0 * g)),
            ((0, 2), r(-3.0 * g * g)),
        ],
        5 => vec![
            ((5, 0), r(1.0)),
            ((3, 1), i(10.0 * g)),
            ((1, 2), r(-15.0 * g * g)),
        ],
        6 => vec![
            ((6, 0), r(1.0)),
            ((4, 1), i(15.0 * g)),
            ((2, 2), r(-45.0 * g * g)),
            ((0, 3), i(-15.0 * g * g * g)),
            (
                (0, 1),
                i(30.0 * g * lambda * lambda * hbar.powi(4) / (m * m)),
            ),
        ],
        _ => return None,
    };
    Some(BivarPolynomial::from_terms(terms, disp.params()))
}

/// One coefficient where generated and tabulated forms differ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermMismatch {
    pub i: u32,
    pub j: u32,
    pub generated: (f64, f64),
    pub tabulated: (f64, f64),
}

/// Coefficients of `qkf_polynomial(n)` that disagree with [`tabulated_qkf`] beyond `tol` (relative).
pub fn compare_with_tabulated(
    n: u32,
    disp: &DispersionOperator,
    tol: f64,
) -> Option<Vec<TermMismatch>> {
    let tab = tabulated_qkf(n, disp)?;
    let gen = qkf_polynomial(n, disp);
    let mut keys: Vec<(u32, u32)> = gen.terms().map(|(k, _)| k).collect();
    keys.extend(tab.terms().map(|(k, _)| k));
    keys.sort_unstable();
    keys.dedup();
    let out = keys
        .into_iter()
        .filter_map(|(i, j)| {
            let (a, b) = (gen.coeff(i, j), tab.coeff(i, j));
            let scale = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
            ((a - b).norm() > tol * scale).then_some(TermMismatch {
                i,
                j,
                generated: (a.re, a.im),
                tabulated: (b.re, b.im),
            })
        })
        .collect();
    Some(out)
}

/// Complex velocity `V = -i (hbar/m) d/dx ln psi` of a polynomial wavefunction.
pub fn complex_velocity(poly: &BivarPolynomial, x: C64, t: f64) -> Result<C64> {
    let psi = poly.eval(x, t);
    if psi.norm() == 0.0 {
        return Err(Error::Singularity(x));
    }
    let dpsi = poly.d_dx().eval(x, t);
    Ok(-I * poly.params.hbar / poly.params.m * dpsi / psi)
}
