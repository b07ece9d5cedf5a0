//! Zeros of `H_n(x, t)` in the complex `x`-plane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poly::{horner, qkf_polynomial, DispersionOperator};
use crate::{Error, Result, C64};

/// Seed for the initial-circle perturbation.
pub const ROOT_SEED: u64 = 0x5eed_2024;
const MAX_ITER: usize = 500;
const POLISH_ITER: usize = 50;
/// Relative backward error `|p(z)| / sum |c_k| |z|^k` accepted after polishing.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// Roots of one time slice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSlice {
    pub t: f64,
    pub roots: Vec<C64>,
}

fn scaled_residual(coeffs: &[C64], z: C64) -> f64 {
    let p = horner(coeffs, z);
    let bound = coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * z.norm() + c.norm());
    if bound == 0.0 {
        0.0
    } else {
        p.norm() / bound
    }
}

fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// All roots of `sum c_k x^k` (lowest degree first) by Aberth-Ehrlich iteration
/// from a perturbed circle of radius `1 + max |c_k / c_n|`, then Newton polishing.
///
/// Roots are sorted by real part, then imaginary part.
pub fn polynomial_roots(coeffs: &[C64], seed: u64) -> Result<Vec<C64>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    // x^k factors are exact roots at the origin
    let zeros = c.iter().take_while(|v| v.norm() == 0.0).count();
    let c: Vec<C64> = c[zeros..].to_vec();
    let deg = n - zeros;
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    if deg > 0 {
        roots.extend(aberth(&c, deg, seed)?);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn aberth(c: &[C64], deg: usize, seed: u64) -> Result<Vec<C64>> {
    let lead = c[deg];
    let radius = 1.0
        + c[..deg]
            .iter()
            .map(|v| (v / lead).norm())
            .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = std::f64::consts::TAU;
    let mut z: Vec<C64> = (0..deg)
        .map(|k| {
            let angle = tau * (k as f64 + rng.gen_range(0.0..0.5)) / deg as f64 + 0.4;
            let r = radius * rng.gen_range(0.9..1.0);
            C64::from_polar(r, angle)
        })
        .collect();
    let dc = derivative(c);

    for _ in 0..MAX_ITER {
        let mut moved = 0.0_f64;
        for k in 0..deg {
            let p = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / horner(&dc, z[k]);
            let repulsion: C64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }

    for zk in z.iter_mut() {
        let mut best = *zk;
        let mut best_res = scaled_residual(c, best);
        for _ in 0..POLISH_ITER {
            if best_res < 1e-15 {
                break;
            }
            let step = horner(c, best) / horner(&dc, best);
            if !step.is_finite() {
                break;
            }
            let cand = best - step;
            let res = scaled_residual(c, cand);
            if res >= best_res {
                break;
            }
            best = cand;
            best_res = res;
        }
        if !(best_res < ROOT_RESIDUAL) {
            return Err(Error::RootPolish {
                t: f64::NAN,
                residual: best_res,
            });
        }
        *zk = best;
    }
    Ok(z)
}

/// Roots of `H_n(., t)` for each `t`, in input order.
///
/// Each slice reports its own polishing failure, so one bad time does not hide the others.
pub fn zeros_over_time(
    n: u32,
    disp: &DispersionOperator,
    times: &[f64],
) -> Result<Vec<Result<RootSlice>>> {
    if n == 0 {
        return Err(Error::domain("zeros need n >= 1"));
    }
    let poly = qkf_polynomial(n, disp);
    Ok(times
        .iter()
        .map(|&t| {
            let coeffs = poly.x_coefficients_at(t);
            match polynomial_roots(&coeffs, ROOT_SEED) {
                Ok(roots) => Ok(RootSlice { t, roots }),
                Err(Error::RootPolish { residual, .. }) => Err(Error::RootPolish { t, residual }),
                Err(e) => Err(e),
            }
        })
        .collect())
}
