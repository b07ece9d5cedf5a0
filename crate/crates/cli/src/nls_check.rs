use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use qosc::formats::{key_value_csv, num};
use qosc::nls::{
    explicit_flow, hierarchy_rhs, nls_residual, qnls_rhs_order2, zero_curvature_mismatch,
    GridField, Soliton, DEFAULT_LENGTH, DEFAULT_POINTS, DEFAULT_X0, MIN_POINTS, QNLS_LENGTH,
    QNLS_POINTS, QNLS_X0,
};
use qosc::C64;
use serde::Serialize;
use serde_json::json;

use crate::common::{domain, with_config, CliError, OutputArgs};

const MAX_POINTS: usize = 1 << 20;
const FLOW_TOL: f64 = 1e-7;
const SOLITON_TOL: f64 = 1e-7;
const ZERO_CURVATURE_TOL: f64 = 1e-6;
/// Required separation between a miswired Lax pair and the genuine one.
const MISWIRE_RATIO: f64 = 1e3;
const QNLS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Test {
    /// Recursion-operator flow N against its explicit local form.
    Flows,
    /// Residual of the NLS equation on an exact one-soliton.
    Soliton,
    /// Compatibility of the Lax pair of flow N (plus a miswired control).
    #[value(name = "zero_curvature")]
    ZeroCurvature,
    /// lambda-parity and lambda = 0 reduction of the truncated q-NLS flow.
    Qnls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Soliton,
    Gaussian,
}

#[derive(Debug, Args, Serialize)]
pub struct NlsArgs {
    #[arg(long, value_enum)]
    test: Test,
    /// Flow index N.
    #[arg(long, alias = "N", default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 0.5)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Test field: sech soliton or Gaussian packet (same a, b, shift, phase).
    #[arg(long, value_enum, default_value_t = Field::Soliton)]
    field: Field,
    #[arg(long, default_value_t = 1.5)]
    a: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    shift: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    phase: f64,
    /// Spectral parameter of the Lax pair.
    #[arg(long, default_value_t = 0.7, allow_hyphen_values = true)]
    p: f64,
    /// Grid start (default -20; -30 for qnls).
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Grid length (default 40; 60 for qnls).
    #[arg(long)]
    length: Option<f64>,
    /// Grid points (default 2048; 768 for qnls).
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutputArgs,
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn sample(a: &NlsArgs, x0: f64, length: f64, points: usize) -> Result<GridField, CliError> {
    let f = match a.field {
        Field::Soliton => {
            Soliton::new(a.a, a.b, a.shift, a.phase, a.kappa)?.field(x0, length, points, 0.0)?
        }
        Field::Gaussian => GridField::sample(x0, length, points, |x| {
            C64::from_polar(
                a.a * (-(x - a.shift).powi(2) / 2.0).exp(),
                a.b * x + a.phase,
            )
        })?,
    };
    Ok(f)
}

pub fn run(mut a: NlsArgs) -> Result<(), CliError> {
    let qnls = a.test == Test::Qnls;
    let x0 = *a.x0.get_or_insert(if qnls { QNLS_X0 } else { DEFAULT_X0 });
    let length = *a
        .length
        .get_or_insert(if qnls { QNLS_LENGTH } else { DEFAULT_LENGTH });
    let points = *a
        .points
        .get_or_insert(if qnls { QNLS_POINTS } else { DEFAULT_POINTS });
    if !(MIN_POINTS..=MAX_POINTS).contains(&points) {
        return Err(domain(format!(
            "points must lie in {MIN_POINTS}..={MAX_POINTS}"
        )));
    }
    if a.test == Test::Soliton && a.field != Field::Soliton {
        return Err(CliError::Usage(
            "--test soliton needs --field soliton".into(),
        ));
    }
    let f = sample(&a, x0, length, points)?;

    let mut metrics = BTreeMap::new();
    let mut tolerances = BTreeMap::new();
    let pass = match a.test {
        Test::Flows => {
            let rhs = hierarchy_rhs(a.n, &f, a.kappa)?;
            let err = max_diff(&rhs.upper, &explicit_flow(a.n, &f, a.kappa)?);
            metrics.insert("max_abs_error", err);
            metrics.insert("flow_max_abs", rhs.max_abs());
            tolerances.insert("max_abs_error", FLOW_TOL);
            err < FLOW_TOL
        }
        Test::Soliton => {
            let sol = Soliton::new(a.a, a.b, a.shift, a.phase, a.kappa)?;
            let r = nls_residual(&f, &sol.time_derivative(&f, 0.0).upper, a.kappa)?;
            metrics.insert("residual", r);
            tolerances.insert("residual", SOLITON_TOL);
            r < SOLITON_TOL
        }
        Test::ZeroCurvature => {
            let good = zero_curvature_mismatch(&f, a.p, a.kappa, a.n, a.n)?;
            let other = if a.n < 4 { a.n + 1 } else { a.n - 1 };
            let bad = zero_curvature_mismatch(&f, a.p, a.kappa, a.n, other)?;
            metrics.insert("residual", good);
            metrics.insert("miswired_residual", bad);
            metrics.insert("miswired_ratio", bad / good);
            tolerances.insert("residual", ZERO_CURVATURE_TOL);
            tolerances.insert("miswired_ratio_min", MISWIRE_RATIO);
            good < ZERO_CURVATURE_TOL && bad / good >= MISWIRE_RATIO
        }
        Test::Qnls => {
            let plus = qnls_rhs_order2(&f, a.kappa, a.lambda, a.hbar, a.m)?;
            let minus = qnls_rhs_order2(&f, a.kappa, -a.lambda, a.hbar, a.m)?;
            let at0 = qnls_rhs_order2(&f, a.kappa, 0.0, a.hbar, a.m)?;
            let c2 = C64::new(a.hbar * a.hbar / (2.0 * a.m), 0.0);
            let n2 = hierarchy_rhs(2, &f, a.kappa)?.scale(c2);
            let neg = C64::new(-1.0, 0.0);
            let rel = |d: f64, scale: f64| d / scale.max(f64::MIN_POSITIVE);
            let parity = rel(plus.axpy(neg, &minus).max_abs(), plus.max_abs());
            let reduction = rel(at0.axpy(neg, &n2).max_abs(), n2.max_abs());
            metrics.insert("parity_error", parity);
            metrics.insert("lambda0_vs_n2_flow", reduction);
            metrics.insert(
                "deviation_from_n2_flow",
                rel(plus.axpy(neg, &n2).max_abs(), n2.max_abs()),
            );
            tolerances.insert("parity_error", QNLS_TOL);
            tolerances.insert("lambda0_vs_n2_flow", QNLS_TOL);
            parity < QNLS_TOL && reduction < QNLS_TOL
        }
    };

    a.out.emit(
        || {
            with_config(
                &a,
                json!({"test": a.test, "metrics": metrics, "tolerances": tolerances, "pass": pass}),
            )
        },
        || {
            let mut rows = vec![("pass", pass.to_string())];
            rows.extend(metrics.iter().map(|(k, v)| (*k, num(*v))));
            key_value_csv(rows)
        },
    )
}
