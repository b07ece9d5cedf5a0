//! Uniform periodic grids with Fourier derivative and antiderivative.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::{Error, Result, C64, I};

/// Minimum number of grid points.
pub const MIN_POINTS: usize = 16;
/// `|psi|` at both ends below this fraction of `max |psi|` sets `decay_checked`.
pub const DECAY_FLAG_TOL: f64 = 1e-10;
/// Relative edge magnitude above which the integro-differential operators refuse a field.
pub const DECAY_GUARD_TOL: f64 = 1e-7;

pub const DEFAULT_X0: f64 = -20.0;
pub const DEFAULT_LENGTH: f64 = 40.0;
pub const DEFAULT_POINTS: usize = 2048;
/// Grid for the sixth-order q-NLS operator. `R^6` amplifies both the end mismatch
/// of the periodic extension and the aliasing floor, so the domain is wider (ends at
/// round-off level) while `k_max ~ 40` still resolves unit-width solitons.
pub const QNLS_X0: f64 = -30.0;
pub const QNLS_LENGTH: f64 = 60.0;
pub const QNLS_POINTS: usize = 768;

/// The doublet `(psi, psibar)` sampled on `x0 + k dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub x0: f64,
    pub dx: f64,
    pub psi: Vec<C64>,
    pub psibar: Vec<C64>,
    pub decay_checked: bool,
}

impl GridField {
    /// Independent `psi` and `psibar`.
    pub fn new(x0: f64, dx: f64, psi: Vec<C64>, psibar: Vec<C64>) -> Result<Self> {
        if psi.len() != psibar.len() {
            return Err(Error::domain("psi and psibar lengths differ"));
        }
        if psi.len() < MIN_POINTS {
            return Err(Error::domain(format!(
                "grid needs at least {MIN_POINTS} points"
            )));
        }
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::domain(format!("bad grid spacing dx = {dx}")));
        }
        let decay_checked = decays(&psi, DECAY_FLAG_TOL) && decays(&psibar, DECAY_FLAG_TOL);
        Ok(Self {
            x0,
            dx,
            psi,
            psibar,
            decay_checked,
        })
    }

    /// Physical field: `psibar = conj(psi)`.
    pub fn physical(x0: f64, dx: f64, psi: Vec<C64>) -> Result<Self> {
        let psibar = psi.iter().map(|z| z.conj()).collect();
        Self::new(x0, dx, psi, psibar)
    }

    /// Sample `psi(x)` on `[x0, x0 + length)` with `n` points.
    pub fn sample<F: Fn(f64) -> C64>(x0: f64, length: f64, n: usize, psi: F) -> Result<Self> {
        let dx = length / n as f64;
        Self::physical(x0, dx, (0..n).map(|k| psi(x0 + k as f64 * dx)).collect())
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        grid_points(self.x0, self.dx, self.len())
    }

    pub fn doublet(&self) -> Doublet {
        Doublet {
            upper: self.psi.clone(),
            lower: self.psibar.clone(),
        }
    }

    pub fn with_doublet(&self, d: Doublet) -> Result<Self> {
        Self::new(self.x0, self.dx, d.upper, d.lower)
    }
}

pub fn grid_points(x0: f64, dx: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| x0 + k as f64 * dx).collect()
}

/// Two arrays on the same grid: `(upper, lower)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Doublet {
    pub upper: Vec<C64>,
    pub lower: Vec<C64>,
}

impl Doublet {
    pub fn zeros(n: usize) -> Self {
        Self {
            upper: vec![C64::new(0.0, 0.0); n],
            lower: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            upper: self.upper.iter().map(|z| z * c).collect(),
            lower: self.lower.iter().map(|z| z * c).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: C64, other: &Doublet) -> Self {
        Self {
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + c * b)
                .collect(),
            lower: self
                .lower
                .iter()
                .zip(&other.lower)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    /// Largest entry modulus in either component.
    pub fn max_abs(&self) -> f64 {
        self.upper
            .iter()
            .chain(&self.lower)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `(i sigma_3)^{-1}`: `(upper, lower) -> (-i upper, i lower)`.
    pub fn inv_i_sigma3(&self) -> Self {
        Self {
            upper: self.upper.iter().map(|z| -I * z).collect(),
            lower: self.lower.iter().map(|z| I * z).collect(),
        }
    }
}

pub(crate) fn decays(f: &[C64], tol: f64) -> bool {
    let peak = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return true;
    }
    let edge = f[0].norm().max(f[f.len() - 1].norm());
    edge <= tol * peak
}

pub(crate) fn edge_ratio(f: &[C64]) -> f64 {
    let peak = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        0.0
    } else {
        f[0].norm().max(f[f.len() - 1].norm()) / peak
    }
}

/// Fourier differentiation on a fixed periodic grid, with cached FFT plans.
#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    dx: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("dx", &self.dx)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(n: usize, dx: f64) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::domain(format!(
                "grid needs at least {MIN_POINTS} points"
            )));
        }
        if !(dx > 0.0) {
            return Err(Error::domain("grid spacing must be positive"));
        }
        let mut planner = FftPlanner::new();
        let length = n as f64 * dx;
        let k = (0..n)
            .map(|j| {
                // the Nyquist mode has no well-defined derivative sign; drop it
                if 2 * j == n {
                    0.0
                } else {
                    let m = if 2 * j < n {
                        j as f64
                    } else {
                        j as f64 - n as f64
                    };
                    std::f64::consts::TAU * m / length
                }
            })
            .collect();
        Ok(Self {
            n,
            dx,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            k,
        })
    }

    pub fn for_field(f: &GridField) -> Result<Self> {
        Self::new(f.len(), f.dx)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    fn check(&self, f: &[C64]) {
        assert_eq!(
            f.len(),
            self.n,
            "array length does not match the spectral grid"
        );
    }

    pub fn forward(&self, f: &[C64]) -> Vec<C64> {
        self.check(f);
        let mut buf = f.to_vec();
        self.fwd.process(&mut buf);
        buf
    }

    pub fn inverse(&self, spec: &[C64]) -> Vec<C64> {
        let mut buf = spec.to_vec();
        self.inv.process(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= s);
        buf
    }

    /// Apply a Fourier multiplier `m(k)`.
    pub fn multiply<M: Fn(f64) -> C64>(&self, f: &[C64], m: M) -> Vec<C64> {
        let mut spec = self.forward(f);
        for (z, &k) in spec.iter_mut().zip(&self.k) {
            *z *= m(k);
        }
        self.inverse(&spec)
    }

    pub fn derivative(&self, f: &[C64]) -> Vec<C64> {
        self.multiply(f, |k| I * k)
    }

    /// Cumulative integral from the left grid end.
    ///
    /// The mean of `f` is integrated exactly as a linear ramp; the remainder is
    /// periodic and is integrated as the Fourier multiplier `1/(ik)`. The result is
    /// shifted to vanish at the first grid point.
    pub fn antiderivative(&self, f: &[C64]) -> Vec<C64> {
        let mut spec = self.forward(f);
        let mean = spec[0] / self.n as f64;
        spec[0] = C64::new(0.0, 0.0);
        for (j, z) in spec.iter_mut().enumerate().skip(1) {
            let k = self.k[j];
            *z = if k == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                *z / (I * k)
            };
        }
        let mut g = self.inverse(&spec);
        for (j, z) in g.iter_mut().enumerate() {
            *z += mean * (j as f64 * self.dx);
        }
        let g0 = g[0];
        g.iter_mut().for_each(|z| *z -= g0);
        g
    }
}

/// Spectral derivative; plans a fresh FFT. Prefer [`SpectralGrid`] for repeated use.
pub fn derivative(field: &[C64], dx: f64) -> Result<Vec<C64>> {
    Ok(SpectralGrid::new(field.len(), dx)?.derivative(field))
}

/// Cumulative integral from the left end; see [`SpectralGrid::antiderivative`].
pub fn antiderivative(field: &[C64], dx: f64) -> Result<Vec<C64>> {
    Ok(SpectralGrid::new(field.len(), dx)?.antiderivative(field))
}
