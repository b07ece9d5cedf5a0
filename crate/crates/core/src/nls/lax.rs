//! Zakharov-Shabat pair for the `N`-th flow and its zero-curvature check.
//!
//! Sign conventions (fixed by requiring the compatibility condition to close):
//!
//! ```text
//! J1 = [ +ip/2      -k^2 psibar ]      J0 = [ -iA     -k^2 Cbar ]
//!      [ psi        -ip/2       ]           [ C       +iA       ]
//! C_N = sum_{k=1..N} p^(N-k) R^(k-1) (psi, psibar)
//! A_N = -p^N/2 - i k^2 ( I(psibar C) - I(psi Cbar) )
//! ```

use super::grid::{Doublet, GridField};
use super::hierarchy::{hierarchy_rhs, Recursion};
use crate::{Error, Result, C64, I};

/// Time-part coefficients of the linear problem.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxData {
    pub n: u32,
    pub p: f64,
    pub c: Doublet,
    pub a: Vec<C64>,
}

pub fn lax_coefficients(n: u32, f: &GridField, p: f64, kappa: f64) -> Result<LaxData> {
    if !(1..=4).contains(&n) {
        return Err(Error::domain(format!(
            "Lax pair index N = {n} outside 1..=4"
        )));
    }
    let r = Recursion::new(f, kappa)?;
    let mut rk = f.doublet();
    let mut c = Doublet::zeros(f.len());
    for k in 1..=n {
        if k > 1 {
            rk = r.apply(&rk)?;
        }
        c = c.axpy(C64::new(p.powi((n - k) as i32), 0.0), &rk);
    }
    let ib = r.integral_of_product(&f.psibar, &c.upper);
    let ip = r.integral_of_product(&f.psi, &c.lower);
    let k2 = kappa * kappa;
    let head = C64::new(-0.5 * p.powi(n as i32), 0.0);
    let a = ib
        .iter()
        .zip(&ip)
        .map(|(x, y)| head - I * k2 * (x - y))
        .collect();
    Ok(LaxData { n, p, c, a })
}

type M2 = [[C64; 2]; 2];

fn commutator(a: &M2, b: &M2) -> M2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    out
}

/// `max |dJ1/dt - dJ0/dx + [J1, J0]|` for the Lax pair of flow `lax_n`, with `psi_t`
/// taken from flow `flow_n`. Equal indices give the genuine compatibility check;
/// unequal ones are a miswiring control.
pub fn zero_curvature_mismatch(
    f: &GridField,
    p: f64,
    kappa: f64,
    lax_n: u32,
    flow_n: u32,
) -> Result<f64> {
    let lax = lax_coefficients(lax_n, f, p, kappa)?;
    let dt = hierarchy_rhs(flow_n, f, kappa)?;
    let r = Recursion::new(f, kappa)?;
    let g = r.grid();
    let cx = g.derivative(&lax.c.upper);
    let cbx = g.derivative(&lax.c.lower);
    let k2 = kappa * kappa;
    let mut worst = 0.0_f64;
    for j in 0..f.len() {
        let (psi, psib) = (f.psi[j], f.psibar[j]);
        let (c, cb, a) = (lax.c.upper[j], lax.c.lower[j], lax.a[j]);
        // A is an integral, so its x-derivative is exact: A_x = -i k^2 (psibar C - psi Cbar)
        let ax = -I * k2 * (psib * c - psi * cb);
        let j1: M2 = [[I * p / 2.0, -k2 * psib], [psi, -I * p / 2.0]];
        let j0: M2 = [[-I * a, -k2 * cb], [c, I * a]];
        let j1_t: M2 = [
            [C64::new(0.0, 0.0), -k2 * dt.lower[j]],
            [dt.upper[j], C64::new(0.0, 0.0)],
        ];
        let j0_x: M2 = [[-I * ax, -k2 * cbx[j]], [cx[j], I * ax]];
        let br = commutator(&j1, &j0);
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max((j1_t[a][b] - j0_x[a][b] + br[a][b]).norm());
            }
        }
    }
    Ok(worst)
}

/// Zero-curvature residual of the `N = 2` (NLS) Lax pair.
pub fn zero_curvature_residual(f: &GridField, p: f64, kappa: f64) -> Result<f64> {
    zero_curvature_mismatch(f, p, kappa, 2, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nls::hierarchy::Soliton;

    fn soliton() -> GridField {
        Soliton::new(1.5, 0.2, 0.0, 0.3, 1.0)
            .unwrap()
            .field(-20.0, 40.0, 2048, 0.0)
            .unwrap()
    }

    #[test]
    fn first_order_coefficients() {
        let f = soliton();
        let lax = lax_coefficients(1, &f, 0.7, 1.0).unwrap();
        assert_eq!(lax.c.upper, f.psi);
        assert_eq!(lax.c.lower, f.psibar);
        // with C = (psi, psibar), the bracket integrand psibar psi - psi psibar vanishes
        assert!(lax
            .a
            .iter()
            .all(|a| (a - C64::new(-0.35, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn linear_case_constant_a() {
        let f = GridField::sample(-20.0, 40.0, 512, |x| C64::new((-x * x).exp(), 0.0)).unwrap();
        for n in 1..=4 {
            let lax = lax_coefficients(n, &f, 0.9, 0.0).unwrap();
            let expect = -0.5 * 0.9f64.powi(n as i32);
            assert!(lax
                .a
                .iter()
                .all(|a| (a - C64::new(expect, 0.0)).norm() < 1e-15));
        }
    }

    #[test]
    fn second_order_two_terms() {
        let f = soliton();
        let p = 0.7;
        let lax = lax_coefficients(2, &f, p, 1.0).unwrap();
        let rpsi = Recursion::new(&f, 1.0)
            .unwrap()
            .apply(&f.doublet())
            .unwrap();
        for j in 0..f.len() {
            assert!((lax.c.upper[j] - (p * f.psi[j] + rpsi.upper[j])).norm() < 1e-14);
        }
    }

    #[test]
    fn compatibility_closes() {
        let f = soliton();
        assert!(zero_curvature_residual(&f, 0.7, 1.0).unwrap() < 1e-6);
        for n in 1..=4 {
            assert!(
                zero_curvature_mismatch(&f, 0.7, 1.0, n, n).unwrap() < 1e-6,
                "N={n}"
            );
        }
        let g =
            GridField::sample(-20.0, 40.0, 1024, |x| C64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
        assert!(zero_curvature_residual(&g, 0.7, 0.0).unwrap() < 1e-6);
    }

    #[test]
    fn wrong_flow_is_detected() {
        let f = soliton();
        let good = zero_curvature_residual(&f, 0.7, 1.0).unwrap();
        let bad = zero_curvature_mismatch(&f, 0.7, 1.0, 2, 3).unwrap();
        assert!(bad > 1e-2 && bad > 1e3 * good, "{good} vs {bad}");
    }
}
