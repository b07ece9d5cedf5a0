//! Complex potentials `F(z)` and the algebra used to build image systems.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::{Error, Result, C64, I};

type CFn = Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>;

/// Analytic `F(z)` with optional analytic `dF/dz` and its excluded points.
///
/// The stream function `Im F` is the physically meaningful part; `Re F` may jump
/// across logarithmic branch cuts.
#[derive(Clone)]
pub struct ComplexPotential {
    f: CFn,
    df: Option<CFn>,
    singularities: Vec<C64>,
}

impl fmt::Debug for ComplexPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexPotential")
            .field("analytic_derivative", &self.df.is_some())
            .field("singularities", &self.singularities)
            .finish()
    }
}

fn hits(z: C64, s: C64) -> bool {
    (z - s).norm() <= 1e-14 * s.norm().max(1.0)
}

impl ComplexPotential {
    pub fn new<F>(f: F, singularities: Vec<C64>) -> Self
    where
        F: Fn(C64) -> Result<C64> + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            df: None,
            singularities,
        }
    }

    pub fn with_derivative<D>(mut self, df: D) -> Self
    where
        D: Fn(C64) -> Result<C64> + Send + Sync + 'static,
    {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn singularities(&self) -> &[C64] {
        &self.singularities
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.df.is_some()
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if let Some(&s) = self.singularities.iter().find(|&&s| hits(z, s)) {
            return Err(Error::Singularity(s));
        }
        (self.f)(z)
    }

    /// Stream function `Im F(z)`.
    pub fn stream(&self, z: C64) -> Result<f64> {
        Ok(self.eval(z)?.im)
    }

    /// Complex velocity `dF/dz = u - i v`.
    pub fn derivative(&self, z: C64) -> Result<C64> {
        if let Some(&s) = self.singularities.iter().find(|&&s| hits(z, s)) {
            return Err(Error::Singularity(s));
        }
        match &self.df {
            Some(df) => df(z),
            None => self.numeric_derivative(z),
        }
    }

    /// Fluid velocity `u + i v = conj(dF/dz)`.
    pub fn velocity(&self, z: C64) -> Result<C64> {
        Ok(self.derivative(z)?.conj())
    }

    /// Central difference along the real axis with one Richardson step.
    ///
    /// Uses `Im F` differentiated along `y` as well, since `Im F` is single-valued
    /// for vortex flows where `Re F` may cross a branch cut:
    /// `dF/dz = d(Im F)/dy + i d(Im F)/dx`.
    pub fn numeric_derivative(&self, z: C64) -> Result<C64> {
        let h = 1e-6 * z.norm().max(1.0);
        let psi = |w: C64| self.stream(w);
        let diff = |dir: C64, h: f64| -> Result<f64> {
            Ok((psi(z + dir * h)? - psi(z - dir * h)?) / (2.0 * h))
        };
        let rich = |dir: C64| -> Result<f64> {
            let (a, b) = (diff(dir, h)?, diff(dir, h / 2.0)?);
            Ok((4.0 * b - a) / 3.0)
        };
        let dpsi_dx = rich(C64::new(1.0, 0.0))?;
        let dpsi_dy = rich(I)?;
        Ok(C64::new(dpsi_dy, dpsi_dx))
    }

    /// `a F`, for real or complex `a`.
    pub fn scaled(&self, a: C64) -> Self {
        let (f, df) = (self.f.clone(), self.df.clone());
        Self {
            f: Arc::new(move |z| Ok(a * f(z)?)),
            df: df.map(|d| -> CFn { Arc::new(move |z| Ok(a * d(z)?)) }),
            singularities: self.singularities.clone(),
        }
    }

    /// `F(c z)` for a nonzero constant `c`.
    pub fn rescaled(&self, c: C64) -> Self {
        let (f, df) = (self.f.clone(), self.df.clone());
        Self {
            f: Arc::new(move |z| f(c * z)),
            df: df.map(|d| -> CFn { Arc::new(move |z| Ok(c * d(c * z)?)) }),
            singularities: self.singularities.iter().map(|s| s / c).collect(),
        }
    }

    /// `F(r2 / z)` (inversion composed with scaling, `r2` a squared radius times a constant).
    ///
    /// The origin is added to the singularities since `F` is rarely analytic at infinity.
    pub fn inverted(&self, r2: C64) -> Self {
        let (f, df) = (self.f.clone(), self.df.clone());
        let mut sing: Vec<C64> = self
            .singularities
            .iter()
            .filter(|s| s.norm() > 0.0)
            .map(|s| r2 / s)
            .collect();
        sing.push(C64::new(0.0, 0.0));
        Self {
            f: Arc::new(move |z| f(r2 / z)),
            df: df.map(|d| -> CFn { Arc::new(move |z| Ok(-r2 / (z * z) * d(r2 / z)?)) }),
            singularities: sing,
        }
    }

    /// `conj(F(conj(w)))`, the Schwarz conjugate flow.
    pub fn conjugate(&self) -> Self {
        let (f, df) = (self.f.clone(), self.df.clone());
        Self {
            f: Arc::new(move |w| Ok(f(w.conj())?.conj())),
            df: df.map(|d| -> CFn { Arc::new(move |w| Ok(d(w.conj())?.conj())) }),
            singularities: self.singularities.iter().map(|s| s.conj()).collect(),
        }
    }

    /// Sum of potentials; the derivative is analytic only if every part's is.
    pub fn sum(parts: Vec<ComplexPotential>) -> Self {
        let mut sing: Vec<C64> = parts
            .iter()
            .flat_map(|p| p.singularities.iter().copied())
            .collect();
        dedup_points(&mut sing);
        let fs: Vec<CFn> = parts.iter().map(|p| p.f.clone()).collect();
        let dfs: Option<Vec<CFn>> = parts.iter().map(|p| p.df.clone()).collect();
        let mut out = Self {
            f: Arc::new(move |z| fs.iter().map(|f| f(z)).sum()),
            df: None,
            singularities: sing,
        };
        if let Some(dfs) = dfs {
            out.df = Some(Arc::new(move |z| dfs.iter().map(|d| d(z)).sum()));
        }
        out
    }

    pub fn plus(&self, other: &ComplexPotential) -> Self {
        Self::sum(vec![self.clone(), other.clone()])
    }
}

fn dedup_points(v: &mut Vec<C64>) {
    let mut out: Vec<C64> = Vec::with_capacity(v.len());
    for &p in v.iter() {
        if !out.iter().any(|&q| hits(p, q)) {
            out.push(p);
        }
    }
    *v = out;
}

/// Vortex `F = (i Gamma / 2 pi) ln(z - z0)`.
pub fn base_vortex(z0: C64, gamma: f64) -> ComplexPotential {
    let k = I * gamma / (2.0 * PI);
    ComplexPotential::new(move |z| Ok(k * (z - z0).ln()), vec![z0])
        .with_derivative(move |z| Ok(k / (z - z0)))
}

/// Uniform stream `F = U z`.
pub fn base_uniform(u: C64) -> ComplexPotential {
    ComplexPotential::new(move |z| Ok(u * z), Vec::new()).with_derivative(move |_| Ok(u))
}

/// Dipole `F = mu / (z - a)`: a flow that decays at infinity.
pub fn base_dipole(a: C64, mu: C64) -> ComplexPotential {
    ComplexPotential::new(move |z| Ok(mu / (z - a)), vec![a])
        .with_derivative(move |z| Ok(-mu / ((z - a) * (z - a))))
}

pub fn conjugate_flow(f: &ComplexPotential) -> ComplexPotential {
    f.conjugate()
}

/// One point of a sampled field. `masked` rows carry no values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSample {
    pub z: C64,
    pub f: Option<C64>,
    pub v: Option<C64>,
    pub masked: bool,
}

/// Rectangular sampling window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldGrid {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

/// Points within this distance of a singularity are masked.
pub const MASK_RADIUS: f64 = 1e-3;

/// Row-major samples (`re` fastest); points near singularities, or where evaluation
/// fails, are kept with `masked = true`.
pub fn sample_field(f: &ComplexPotential, grid: &FieldGrid) -> Vec<FieldSample> {
    let coord = |lo: f64, hi: f64, n: usize, k: usize| {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let z = C64::new(
                coord(grid.re.0, grid.re.1, grid.nx, i),
                coord(grid.im.0, grid.im.1, grid.ny, j),
            );
            let near = f
                .singularities()
                .iter()
                .any(|s| (z - s).norm() < MASK_RADIUS);
            let vals = if near {
                None
            } else {
                f.eval(z).and_then(|fz| Ok((fz, f.velocity(z)?))).ok()
            };
            out.push(match vals {
                Some((fz, v)) if fz.is_finite() && v.is_finite() => FieldSample {
                    z,
                    f: Some(fz),
                    v: Some(v),
                    masked: false,
                },
                _ => FieldSample {
                    z,
                    f: None,
                    v: None,
                    masked: true,
                },
            });
        }
    }
    out
}
