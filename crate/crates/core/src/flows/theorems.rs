//! Circle, wedge and annulus image theorems.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::potential::ComplexPotential;
use crate::{Error, Result, C64, I};

/// `F = f(z) + conj-f(r^2 / z)`: impermeable circle `|z| = r`.
pub fn one_circle(f: &ComplexPotential, r: f64) -> Result<ComplexPotential> {
    if !(r > 0.0) {
        return Err(Error::domain("circle radius must be positive"));
    }
    Ok(f.plus(&f.conjugate().inverted(C64::new(r * r, 0.0))))
}

/// `q^(2k) = exp(2 pi i k / n)`.
fn rotation(k: u32, n: u32) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * f64::from(k) / f64::from(n))
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::domain("wedge index n must be at least 1"))
    } else {
        Ok(())
    }
}

/// Wedge of opening `pi / n`: `sum_k f(q^(2k) z) + conj-f(q^(2k) z)`, `q = exp(i pi / n)`.
pub fn wedge(f: &ComplexPotential, n: u32) -> Result<ComplexPotential> {
    check_n(n)?;
    let fc = f.conjugate();
    let parts = (0..n)
        .flat_map(|k| {
            let c = rotation(k, n);
            [f.rescaled(c), fc.rescaled(c)]
        })
        .collect();
    Ok(ComplexPotential::sum(parts))
}

/// `prod_{k<n} (z - z0 q^(2k))`, which collapses to `z^n - z0^n`.
pub fn kummer_product(z: C64, z0: C64, n: u32) -> C64 {
    (0..n).map(|k| z - z0 * rotation(k, n)).product()
}

/// Closed form of a vortex at `z0` in the wedge `0 < arg z < pi/n`:
/// `F = (i Gamma / 2 pi) ln((z^n - z0^n) / (z^n - conj(z0)^n))`.
pub fn kummer_kaleidoscope(z0: C64, gamma: f64, n: u32) -> Result<ComplexPotential> {
    check_n(n)?;
    let arg = z0.arg();
    if !(z0.norm() > 0.0 && arg > 0.0 && arg < PI / f64::from(n)) {
        return Err(Error::domain(format!(
            "vortex must lie strictly inside the wedge 0 < arg z < pi/{n}"
        )));
    }
    let k = I * gamma / (2.0 * PI);
    let ni = n as i32;
    let (a, b) = (z0.powi(ni), z0.conj().powi(ni));
    let sing = (0..n)
        .flat_map(|j| [z0 * rotation(j, n), z0.conj() * rotation(j, n)])
        .collect();
    Ok(ComplexPotential::new(
        move |z| {
            let zn = z.powi(ni);
            Ok(k * ((zn - a) / (zn - b)).ln())
        },
        sing,
    )
    .with_derivative(move |z| {
        let zn = z.powi(ni);
        let dzn = f64::from(n) * z.powi(ni - 1);
        Ok(k * dzn * (1.0 / (zn - a) - 1.0 / (zn - b)))
    }))
}

/// Wedge bounded additionally by the arc `|z| = r`.
pub fn circular_wedge(f: &ComplexPotential, n: u32, r: f64) -> Result<ComplexPotential> {
    if !(r > 0.0) {
        return Err(Error::domain("circle radius must be positive"));
    }
    let w = wedge(f, n)?;
    Ok(w.plus(&w.inverted(C64::new(r * r, 0.0))))
}

/// Annulus `r1 < |z| < r2` with image truncation `|m| <= m_trunc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub r1: f64,
    pub r2: f64,
    pub m_trunc: u32,
}

pub const DEFAULT_TRUNCATION: u32 = 16;

impl AnnulusSpec {
    pub fn new(r1: f64, r2: f64, m_trunc: u32) -> Result<Self> {
        if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
            return Err(Error::domain(format!(
                "annulus needs 0 < r1 < r2, got r1={r1}, r2={r2}"
            )));
        }
        if m_trunc == 0 {
            return Err(Error::domain("image truncation M must be at least 1"));
        }
        Ok(Self { r1, r2, m_trunc })
    }

    /// `Q = r2^2 / r1^2`.
    pub fn q(&self) -> f64 {
        (self.r2 / self.r1).powi(2)
    }

    pub fn with_truncation(&self, m_trunc: u32) -> Result<Self> {
        Self::new(self.r1, self.r2, m_trunc)
    }

    pub fn contains(&self, z: C64) -> bool {
        let r = z.norm();
        r > self.r1 && r < self.r2
    }

    fn generations(&self) -> impl Iterator<Item = f64> + '_ {
        let q = self.q();
        let m = self.m_trunc as i32;
        (-m..=m).map(move |k| q.powi(k))
    }
}

/// `F = f_Q(z) + conj-f_Q(r2^2 / z)` with `f_Q(z) = sum_m f(Q^m z)`.
pub fn two_circle(f: &ComplexPotential, spec: &AnnulusSpec) -> ComplexPotential {
    let fc = f.conjugate();
    let r2 = C64::new(spec.r2 * spec.r2, 0.0);
    let parts = spec
        .generations()
        .flat_map(|qm| {
            let c = C64::new(qm, 0.0);
            [f.rescaled(c), fc.rescaled(c).inverted(r2)]
        })
        .collect();
    ComplexPotential::sum(parts)
}

/// Wedge of opening `pi/n` cut by both annulus circles.
pub fn double_circular_wedge(
    f: &ComplexPotential,
    n: u32,
    spec: &AnnulusSpec,
) -> Result<ComplexPotential> {
    check_n(n)?;
    let fc = f.conjugate();
    let r2 = C64::new(spec.r2 * spec.r2, 0.0);
    let mut parts = Vec::new();
    for qm in spec.generations() {
        for k in 0..n {
            let c = rotation(k, n) * qm;
            parts.push(f.rescaled(c));
            parts.push(fc.rescaled(c));
            parts.push(fc.rescaled(c).inverted(r2));
            parts.push(f.rescaled(c).inverted(r2));
        }
    }
    Ok(ComplexPotential::sum(parts))
}

fn check_inside(z0: C64, spec: &AnnulusSpec) -> Result<()> {
    if spec.contains(z0) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "vortex at |z0| = {} is outside the annulus ({}, {})",
            z0.norm(),
            spec.r1,
            spec.r2
        )))
    }
}

/// Positive and negative image lattices of the upper-half-annulus vortex.
pub fn half_annulus_images(z0: C64, spec: &AnnulusSpec) -> (Vec<C64>, Vec<C64>) {
    let r2 = spec.r2 * spec.r2;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for qm in spec.generations() {
        pos.push(z0 * qm);
        pos.push(r2 / z0 * qm);
        neg.push(z0.conj() * qm);
        neg.push(r2 / z0.conj() * qm);
    }
    (pos, neg)
}

/// Vortex in the upper half of the annulus, as a truncated sum of logarithms:
/// `(i Gamma/2pi) sum_m ln[(z - z0 Q^m)(z - (r2^2/z0) Q^m) / ((z - conj(z0) Q^m)(z - (r2^2/conj(z0)) Q^m))]`.
pub fn annulus_vortex_potential(
    z0: C64,
    gamma: f64,
    spec: &AnnulusSpec,
) -> Result<ComplexPotential> {
    check_inside(z0, spec)?;
    let (pos, neg) = half_annulus_images(z0, spec);
    Ok(log_lattice(gamma, pos, neg))
}

/// Positive images `z0 Q^m`, negative images `(r2^2 / conj z0) Q^m`.
pub fn full_annulus_images(z0: C64, spec: &AnnulusSpec) -> (Vec<C64>, Vec<C64>) {
    let r2 = spec.r2 * spec.r2;
    spec.generations()
        .map(|qm| (z0 * qm, r2 / z0.conj() * qm))
        .unzip()
}

/// Vortex in the full annulus: `(i Gamma/2pi) sum_m ln[(z - z0 Q^m) / (z - (r2^2/conj z0) Q^m)]`.
pub fn annulus_full_vortex_potential(
    z0: C64,
    gamma: f64,
    spec: &AnnulusSpec,
) -> Result<ComplexPotential> {
    check_inside(z0, spec)?;
    let (pos, neg) = full_annulus_images(z0, spec);
    Ok(log_lattice(gamma, pos, neg))
}

fn log_lattice(gamma: f64, pos: Vec<C64>, neg: Vec<C64>) -> ComplexPotential {
    let k = I * gamma / (2.0 * PI);
    let sing: Vec<C64> = pos.iter().chain(&neg).copied().collect();
    let (p1, n1) = (pos.clone(), neg.clone());
    ComplexPotential::new(
        move |z| {
            let s: C64 = p1.iter().map(|a| (z - a).ln()).sum::<C64>()
                - n1.iter().map(|b| (z - b).ln()).sum::<C64>();
            Ok(k * s)
        },
        sing,
    )
    .with_derivative(move |z| {
        let s: C64 = pos.iter().map(|a| 1.0 / (z - a)).sum::<C64>()
            - neg.iter().map(|b| 1.0 / (z - b)).sum::<C64>();
        Ok(k * s)
    })
}

/// Velocity `dz/dt` induced at `z` by the full-annulus image lattice of a vortex at `z0`.
///
/// With `include_self = false` the vortex's own `m = 0` term is dropped, which gives
/// the velocity of the vortex itself when `z = z0`.
pub fn annulus_image_velocity(
    z: C64,
    z0: C64,
    gamma: f64,
    spec: &AnnulusSpec,
    include_self: bool,
) -> Result<C64> {
    check_inside(z0, spec)?;
    let k = I * gamma / (2.0 * PI);
    let (pos, neg) = full_annulus_images(z0, spec);
    let mid = spec.m_trunc as usize;
    let mut w = C64::new(0.0, 0.0);
    for (idx, (a, b)) in pos.iter().zip(&neg).enumerate() {
        if idx != mid || include_self {
            if (z - a).norm() == 0.0 {
                return Err(Error::Singularity(*a));
            }
            w += k / (z - a);
        }
        if (z - b).norm() == 0.0 {
            return Err(Error::Singularity(*b));
        }
        w -= k / (z - b);
    }
    Ok(w.conj())
}

/// Stream-function spread on one boundary piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryResidual {
    pub boundary_id: String,
    #[serde(rename = "stddev_imF")]
    pub stddev_im_f: f64,
    pub samples: usize,
    #[serde(rename = "truncation_M")]
    pub truncation_m: Option<u32>,
}

fn stddev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

fn residual_over(
    f: &ComplexPotential,
    id: &str,
    pts: impl Iterator<Item = C64>,
    truncation_m: Option<u32>,
) -> Result<BoundaryResidual> {
    let vals: Vec<f64> = pts.map(|z| f.stream(z)).collect::<Result<_>>()?;
    Ok(BoundaryResidual {
        boundary_id: id.to_string(),
        stddev_im_f: stddev(&vals),
        samples: vals.len(),
        truncation_m,
    })
}

/// Samples on the arc `r exp(i t)`, `t` in `[t0, t1]` (endpoints excluded when they close a circle).
pub fn arc_residual(
    f: &ComplexPotential,
    id: &str,
    r: f64,
    (t0, t1): (f64, f64),
    samples: usize,
    truncation_m: Option<u32>,
) -> Result<BoundaryResidual> {
    let full = (t1 - t0 - 2.0 * PI).abs() < 1e-12;
    let pts = (0..samples).map(move |k| {
        let s = if full {
            k as f64 / samples as f64
        } else {
            (k as f64 + 0.5) / samples as f64
        };
        C64::from_polar(r, t0 + (t1 - t0) * s)
    });
    residual_over(f, id, pts, truncation_m)
}

pub fn circle_residual(
    f: &ComplexPotential,
    id: &str,
    r: f64,
    samples: usize,
    truncation_m: Option<u32>,
) -> Result<BoundaryResidual> {
    arc_residual(f, id, r, (0.0, 2.0 * PI), samples, truncation_m)
}

/// Samples on the ray `arg z = angle`, geometrically spaced radii in `[rmin, rmax]`.
pub fn ray_residual(
    f: &ComplexPotential,
    id: &str,
    angle: f64,
    (rmin, rmax): (f64, f64),
    samples: usize,
) -> Result<BoundaryResidual> {
    let ratio = (rmax / rmin).ln();
    let pts = (0..samples).map(move |k| {
        let r = rmin * (ratio * k as f64 / (samples - 1).max(1) as f64).exp();
        C64::from_polar(r, angle)
    });
    residual_over(f, id, pts, None)
}

pub const BOUNDARY_SAMPLES: usize = 256;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::potential::{base_dipole, base_uniform, base_vortex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn circle_theorem_uniform_flow() {
        let f = one_circle(&base_uniform(C64::new(1.5, 0.0)), 2.0).unwrap();
        for z in [C64::new(3.0, 1.0), C64::new(-2.5, -4.0)] {
            let expect = 1.5 * (z + 4.0 / z);
            assert!(close(f.eval(z).unwrap(), expect, 1e-15));
        }
        let res = circle_residual(&f, "circle", 2.0, 256, None).unwrap();
        assert!(res.stddev_im_f < 1e-12);
        let v = one_circle(&base_vortex(C64::new(3.0, 1.0), 1.0), 2.0).unwrap();
        assert!(
            circle_residual(&v, "circle", 2.0, 256, None)
                .unwrap()
                .stddev_im_f
                < 1e-12
        );
    }

    #[test]
    fn half_plane_vortex() {
        let z0 = C64::new(0.5, 1.2);
        let w = wedge(&base_vortex(z0, 1.0), 1).unwrap();
        let k = kummer_kaleidoscope(z0, 1.0, 1).unwrap();
        let direct = |z: C64| I / (2.0 * PI) * ((z - z0) / (z - z0.conj())).ln();
        for z in [C64::new(0.1, 0.3), C64::new(-2.0, 4.0)] {
            assert!((w.stream(z).unwrap() - direct(z).im).abs() < 1e-14);
            assert!(close(k.eval(z).unwrap(), direct(z), 1e-14));
        }
    }

    #[test]
    fn wedge_boundaries_and_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5u32 {
            let z0 = C64::from_polar(1.3, 0.4 * PI / f64::from(n));
            let f = wedge(&base_vortex(z0, 1.0), n).unwrap();
            let alpha = PI / f64::from(n);
            for (id, a) in [("ray0", 0.0), ("ray1", alpha)] {
                assert!(
                    ray_residual(&f, id, a, (0.1, 10.0), 256)
                        .unwrap()
                        .stddev_im_f
                        < 1e-10
                );
            }
            let q2 = C64::from_polar(1.0, 2.0 * alpha);
            for _ in 0..64 {
                let z = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let (a, b) = (f.eval(z).unwrap(), f.eval(q2 * z).unwrap());
                assert!((a.im - b.im).abs() < 1e-10);
                // Re F is defined modulo the total circulation of the log branches
                let k = (a.re - b.re) / 1.0;
                assert!((k - k.round()).abs() < 1e-10, "{k}");
                let (va, vb) = (f.derivative(z).unwrap(), f.derivative(q2 * z).unwrap());
                assert!(close(vb, va / q2, 1e-10));
            }
        }
    }

    #[test]
    fn kummer_identity_and_velocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=8u32 {
            let z0 = C64::from_polar(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.1..0.9) * PI / f64::from(n),
            );
            for _ in 0..64 {
                let z = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let lhs = kummer_product(z, z0, n);
                let rhs = z.powi(n as i32) - z0.powi(n as i32);
                assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-300) + 1e-14);
            }
            let k = kummer_kaleidoscope(z0, 1.0, n).unwrap();
            assert_eq!(k.singularities().len(), 2 * n as usize);
            let w = wedge(&base_vortex(z0, 1.0), n).unwrap();
            for _ in 0..64 {
                let z = C64::from_polar(
                    rng.gen_range(0.2..3.0),
                    rng.gen_range(0.05..0.95) * PI / f64::from(n),
                );
                assert!(close(
                    k.derivative(z).unwrap(),
                    w.derivative(z).unwrap(),
                    1e-8
                ));
            }
        }
        assert!(kummer_kaleidoscope(C64::new(1.0, -1.0), 1.0, 2).is_err());
    }

    #[test]
    fn kummer_two_factored() {
        let z0 = C64::new(1.0, 0.5);
        let k = kummer_kaleidoscope(z0, 1.0, 2).unwrap();
        for z in [C64::new(0.3, 0.2), C64::new(2.0, 1.0)] {
            let four = ((z - z0) * (z + z0)) / ((z - z0.conj()) * (z + z0.conj()));
            assert!((k.stream(z).unwrap() - (I / (2.0 * PI) * four.ln()).im).abs() < 1e-14);
        }
    }

    #[test]
    fn circular_wedge_boundaries() {
        let z0 = C64::from_polar(1.5, 0.3);
        let f = circular_wedge(&base_vortex(z0, 1.0), 3, 1.0).unwrap();
        let alpha = PI / 3.0;
        assert!(
            ray_residual(&f, "ray0", 0.0, (1.0, 10.0), 256)
                .unwrap()
                .stddev_im_f
                < 1e-10
        );
        assert!(
            ray_residual(&f, "ray1", alpha, (1.0, 10.0), 256)
                .unwrap()
                .stddev_im_f
                < 1e-10
        );
        assert!(
            arc_residual(&f, "arc", 1.0, (0.0, alpha), 256, None)
                .unwrap()
                .stddev_im_f
                < 1e-10
        );
    }

    fn spec(m: u32) -> AnnulusSpec {
        AnnulusSpec::new(1.0, 2.0, m).unwrap()
    }

    #[test]
    fn two_circle_boundaries_converge() {
        let z0 = C64::from_polar(2f64.sqrt(), 0.7);
        let mut prev = f64::INFINITY;
        for m in [4, 8, 16, 32] {
            let f = two_circle(&base_vortex(z0, 1.0), &spec(m));
            let inner = circle_residual(&f, "inner", 1.0, 256, Some(m))
                .unwrap()
                .stddev_im_f;
            let outer = circle_residual(&f, "outer", 2.0, 256, Some(m))
                .unwrap()
                .stddev_im_f;
            let worst = inner.max(outer);
            assert!(worst < prev, "M={m}: {worst} vs {prev}");
            prev = worst;
            if m >= 12 {
                assert!(worst < 1e-6);
            }
        }
    }

    #[test]
    fn two_circle_periodicity() {
        let f = base_dipole(C64::new(1.2, 0.4), C64::new(0.3, -0.2));
        let q = spec(1).q();
        // F(Qz) - F(z) tends to a constant (end terms f(0) - f(inf)), so compare two points
        let d = |m: u32| {
            let fq = two_circle(&f, &spec(m));
            let shift = |z: C64| fq.eval(q * z).unwrap() - fq.eval(z).unwrap();
            (shift(C64::new(0.9, 1.1)) - shift(C64::new(-1.3, 0.2))).norm()
        };
        assert!(d(12) < d(6));
        assert!(d(12) < 1e-6);
    }

    #[test]
    fn double_wedge_reduces_to_two_circle() {
        let f = base_dipole(C64::new(1.2, 0.4), C64::new(0.3, -0.2));
        let s = spec(8);
        let dw = double_circular_wedge(&f, 1, &s).unwrap();
        let tc = two_circle(&f, &s).plus(&two_circle(&f.conjugate(), &s));
        for z in [C64::new(1.5, 0.2), C64::new(-1.0, 1.1)] {
            assert!(close(dw.eval(z).unwrap(), tc.eval(z).unwrap(), 1e-13));
        }
    }

    #[test]
    fn double_wedge_periodicity() {
        let s = spec(16);
        let z0 = C64::from_polar(1.4, 0.5);
        let f = double_circular_wedge(&base_vortex(z0, 1.0), 3, &s).unwrap();
        let q2 = C64::from_polar(1.0, 2.0 * PI / 3.0);
        for z in [C64::new(1.2, 0.6), C64::new(0.3, 1.6)] {
            assert!((f.stream(q2 * z).unwrap() - f.stream(z).unwrap()).abs() < 1e-9);
            let a = f.stream(s.q() * z).unwrap();
            let b = f.stream(z).unwrap();
            assert!((a - b).abs() < 1e-6 * b.abs().max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn half_annulus_matches_double_wedge() {
        let s = spec(16);
        let z0 = C64::from_polar(1.5, 1.0);
        let a = annulus_vortex_potential(z0, 1.0, &s).unwrap();
        let d = double_circular_wedge(&base_vortex(z0, 1.0), 1, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..64 {
            let z = C64::from_polar(rng.gen_range(1.05..1.95), rng.gen_range(0.05..3.09));
            assert!(close(
                a.derivative(z).unwrap(),
                d.derivative(z).unwrap(),
                1e-8
            ));
        }
        let (pos, _) = half_annulus_images(z0, &s);
        assert!(close(pos[2] / pos[0], C64::new(s.q(), 0.0), 1e-14));
        assert!(annulus_vortex_potential(C64::new(3.0, 0.0), 1.0, &s).is_err());
    }

    #[test]
    fn full_annulus_boundaries() {
        let s = spec(16);
        let f = annulus_full_vortex_potential(C64::new(0.3, 1.4), 1.0, &s).unwrap();
        assert!(
            circle_residual(&f, "inner", 1.0, 256, Some(16))
                .unwrap()
                .stddev_im_f
                < 1e-6
        );
        assert!(
            circle_residual(&f, "outer", 2.0, 256, Some(16))
                .unwrap()
                .stddev_im_f
                < 1e-6
        );
    }
}
