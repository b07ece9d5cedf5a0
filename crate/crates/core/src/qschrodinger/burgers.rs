//! Classical q-Burgers equation `V_t + (lambda/sinh lambda) cosh(lambda m V^2/2) V V_x = 0`
//! solved along characteristics.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::qcalc::lambda_over_sinh;
use crate::{Error, Result};

const SCAN_POINTS: usize = 512;
const RANGE_SAMPLES: usize = 4097;

/// Initial velocity profile `f` with its deformation parameters.
#[derive(Clone)]
pub struct BurgersProfile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub lambda: f64,
    pub m: f64,
    value_range: (f64, f64),
}

impl fmt::Debug for BurgersProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BurgersProfile")
            .field("lambda", &self.lambda)
            .field("m", &self.m)
            .field("value_range", &self.value_range)
            .finish()
    }
}

impl BurgersProfile {
    /// The range of `f` is estimated by sampling `x_range`; it sets the root scan bracket.
    pub fn new<F>(f: F, lambda: f64, m: f64, x_range: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (a, b) = x_range;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!("bad x range [{a}, {b}]")));
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..RANGE_SAMPLES {
            let v = f(a + (b - a) * k as f64 / (RANGE_SAMPLES - 1) as f64);
            if !v.is_finite() {
                return Err(Error::domain("profile is not finite on the sampled range"));
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Self::with_value_range(f, lambda, m, (lo, hi))
    }

    pub fn with_value_range<F>(f: F, lambda: f64, m: f64, value_range: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(m > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(
                "Burgers profile needs m > 0 and finite lambda",
            ));
        }
        if !(value_range.0 <= value_range.1) {
            return Err(Error::domain("empty value range"));
        }
        Ok(Self {
            f: Arc::new(f),
            lambda,
            m,
            value_range,
        })
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Characteristic speed `v (lambda/sinh lambda) cosh(lambda m v^2/2)`.
    pub fn speed(&self, v: f64) -> f64 {
        v * lambda_over_sinh(self.lambda) * (0.5 * self.lambda * self.m * v * v).cosh()
    }

    pub fn value_range(&self) -> (f64, f64) {
        self.value_range
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurgersSolution {
    /// Smallest root found.
    pub v: f64,
    /// Every root found on the scan bracket.
    pub roots: Vec<f64>,
    /// More than one root: the solution is multivalued (past the shock).
    pub multiple: bool,
}

/// `V(x, t)` from the implicit relation `V = f(x - t speed(V))`.
pub fn burgers_solve(profile: &BurgersProfile, x: f64, t: f64) -> Result<BurgersSolution> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        let v = profile.f(x);
        return Ok(BurgersSolution {
            v,
            roots: vec![v],
            multiple: false,
        });
    }
    let g = |v: f64| v - profile.f(x - t * profile.speed(v));
    let (lo, hi) = (profile.value_range.0 - 1.0, profile.value_range.1 + 1.0);
    let grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / SCAN_POINTS as f64)
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&v| g(v)).collect();

    let mut roots = Vec::new();
    for k in 0..SCAN_POINTS {
        let (a, b, ga, gb) = (grid[k], grid[k + 1], vals[k], vals[k + 1]);
        if ga == 0.0 {
            roots.push(a);
        } else if ga * gb < 0.0 {
            roots.push(safeguarded_newton(&g, a, b, ga));
        }
    }
    if vals[SCAN_POINTS] == 0.0 {
        roots.push(grid[SCAN_POINTS]);
    }
    if roots.is_empty() {
        return Err(Error::NoRoot { lo, hi });
    }
    Ok(BurgersSolution {
        v: roots[0],
        multiple: roots.len() > 1,
        roots,
    })
}

/// Newton steps, falling back to bisection whenever a step leaves the bracket.
fn safeguarded_newton<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    let mut v = 0.5 * (a + b);
    for _ in 0..200 {
        let gv = g(v);
        if gv == 0.0 {
            return v;
        }
        if (gv < 0.0) == (ga < 0.0) {
            a = v;
            ga = gv;
        } else {
            b = v;
        }
        let h = 1e-7 * v.abs().max(1.0);
        let dg = (g(v + h) - g(v - h)) / (2.0 * h);
        let newton = v - gv / dg;
        let next = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - v).abs() <= 4.0 * f64::EPSILON * v.abs().max(1.0)
            || b - a <= f64::EPSILON * v.abs().max(1.0)
        {
            return next;
        }
        v = next;
    }
    v
}

/// Earliest time at which the sampled characteristic map
/// `x0 -> x0 + t speed(f(x0))` stops being strictly increasing on `x_range`.
///
/// The map is linear in `t` on every sample cell, so the crossing time of each
/// cell is computed exactly and the minimum taken; this is the limit a bisection on
/// `t` would converge to.
pub fn shock_time(
    profile: &BurgersProfile,
    x_range: (f64, f64),
    resolution: usize,
    t_max: f64,
) -> Result<f64> {
    let (a, b) = x_range;
    if resolution < 2 || !(a < b) {
        return Err(Error::domain(
            "shock search needs resolution >= 2 and a < b",
        ));
    }
    let xs: Vec<f64> = (0..resolution)
        .map(|k| a + (b - a) * k as f64 / (resolution - 1) as f64)
        .collect();
    let s: Vec<f64> = xs.iter().map(|&x| profile.speed(profile.f(x))).collect();
    let t_star = xs
        .windows(2)
        .zip(s.windows(2))
        .filter_map(|(x, v)| {
            let dv = v[1] - v[0];
            (dv < 0.0).then(|| (x[1] - x[0]) / -dv)
        })
        .fold(f64::INFINITY, f64::min);
    if t_star > t_max {
        Err(Error::NoShock { t_max })
    } else {
        Ok(t_star)
    }
}

/// Default upper limit for the shock search.
pub const SHOCK_T_MAX: f64 = 1e4;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn initial_time_returns_profile() {
        let p = BurgersProfile::new(|x: f64| x.sin(), 0.5, 1.0, (-5.0, 5.0)).unwrap();
        assert_eq!(burgers_solve(&p, 1.3, 0.0).unwrap().v, 1.3f64.sin());
    }

    #[test]
    fn constant_profile() {
        let p = BurgersProfile::new(|_| 0.75, 0.8, 1.0, (-1.0, 1.0)).unwrap();
        for (x, t) in [(0.0, 1.0), (3.0, 10.0), (-2.0, 0.3)] {
            let s = burgers_solve(&p, x, t).unwrap();
            assert_relative_eq!(s.v, 0.75, epsilon = 1e-14);
            assert!(!s.multiple);
        }
        assert!(matches!(
            shock_time(&p, (-5.0, 5.0), 200, SHOCK_T_MAX),
            Err(Error::NoShock { .. })
        ));
    }

    #[test]
    fn linear_profile_classical_limit() {
        // V = a (x - V t) => V = a x / (1 + a t)
        let a = 0.4;
        let p = BurgersProfile::with_value_range(move |x| a * x, 0.0, 1.0, (-4.0, 4.0)).unwrap();
        for (x, t) in [(1.0, 0.5), (-3.0, 2.0), (2.5, 7.0)] {
            assert_relative_eq!(
                burgers_solve(&p, x, t).unwrap().v,
                a * x / (1.0 + a * t),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn tanh_shock_time() {
        let p = BurgersProfile::new(|x: f64| -x.tanh(), 1e-9, 1.0, (-5.0, 5.0)).unwrap();
        let t = shock_time(&p, (-5.0, 5.0), 2001, SHOCK_T_MAX).unwrap();
        assert!((t - 1.0).abs() < 1e-4, "{t}");
        let inc = BurgersProfile::new(|x: f64| x.tanh(), 0.5, 1.0, (-5.0, 5.0)).unwrap();
        assert!(shock_time(&inc, (-5.0, 5.0), 500, SHOCK_T_MAX).is_err());
    }

    #[test]
    fn multivalued_after_shock() {
        let p = BurgersProfile::new(|x: f64| -x.tanh(), 0.0, 1.0, (-8.0, 8.0)).unwrap();
        assert!(!burgers_solve(&p, 0.05, 0.5).unwrap().multiple);
        assert!(burgers_solve(&p, 0.05, 3.0).unwrap().multiple);
    }

    #[test]
    fn small_time_matches_euler_step() {
        let p = BurgersProfile::new(|x: f64| 0.5 * (-x * x).exp(), 0.7, 1.3, (-6.0, 6.0)).unwrap();
        let x = 0.4;
        let f = p.f(x);
        let fp = -2.0 * x * f;
        for t in [1e-2, 5e-3, 2.5e-3] {
            let euler = f - t * p.speed(f) * fp;
            let err = (burgers_solve(&p, x, t).unwrap().v - euler).abs();
            assert!(err < 2.0 * t * t, "t={t} err={err}");
        }
    }
}
