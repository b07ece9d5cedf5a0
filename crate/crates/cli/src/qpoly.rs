use std::collections::BTreeMap;

use clap::Args;
use qosc::formats::{num, polynomial_csv, polynomial_json, roots_csv};
use qosc::qschrodinger::{
    polynomial_roots, qkf_polynomial, schrodinger_residual, DispersionOperator, RootSlice,
    ROOT_SEED,
};
use serde::Serialize;
use serde_json::json;

use crate::common::{domain, with_config, write_to, CliError, Format, OutputArgs};

const MAX_DEGREE: u32 = 64;

#[derive(Debug, Args, Serialize)]
pub struct QpolyArgs {
    /// Polynomial index (x-degree).
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Comma-separated times at which to find the zeros in x.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    times: Vec<f64>,
    /// File for the zeros as CSV (t, k, re, im).
    #[arg(long)]
    roots_output: Option<String>,
    /// Report the largest coefficient of the equation residual.
    #[arg(long)]
    check_residual: bool,
    /// Seed of the root finder's starting perturbation.
    #[arg(long, default_value_t = ROOT_SEED)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutputArgs,
}

fn roots(
    a: &QpolyArgs,
    poly: &qosc::qschrodinger::BivarPolynomial,
) -> Result<Vec<RootSlice>, CliError> {
    if a.n == 0 && !a.times.is_empty() {
        return Err(domain("H_0 is constant and has no zeros"));
    }
    a.times
        .iter()
        .map(|&t| {
            if !t.is_finite() {
                return Err(domain(format!("time {t} is not finite")));
            }
            polynomial_roots(&poly.x_coefficients_at(t), a.seed)
                .map(|roots| RootSlice { t, roots })
                .map_err(|e| match e {
                    qosc::Error::RootPolish { residual, .. } => {
                        qosc::Error::RootPolish { t, residual }
                    }
                    e => e,
                })
                .map_err(CliError::from)
        })
        .collect()
}

pub fn run(a: QpolyArgs) -> Result<(), CliError> {
    if a.n > MAX_DEGREE {
        return Err(domain(format!("n = {} exceeds {MAX_DEGREE}", a.n)));
    }
    if a.out.format == Format::Csv && !a.times.is_empty() && a.roots_output.is_none() {
        return Err(CliError::Usage(
            "--times with --format csv needs --roots-output".into(),
        ));
    }
    let disp = DispersionOperator::new(a.lambda, a.hbar, a.m)?;
    let poly = qkf_polynomial(a.n, &disp);
    let slices = roots(&a, &poly)?;
    let residual = a
        .check_residual
        .then(|| schrodinger_residual(&poly, &disp).max_abs());

    if let Some(path) = &a.roots_output {
        write_to(path, &roots_csv(&slices))?;
    }
    if let (Some(r), Format::Csv) = (residual, a.out.format) {
        eprintln!("max_residual,{}", num(r));
    }
    a.out.emit(
        || {
            let extra = BTreeMap::from([("n".to_string(), f64::from(a.n))]);
            let mut body = polynomial_json(&poly, &extra);
            if !slices.is_empty() {
                body["roots"] = json!(slices);
            }
            if let Some(r) = residual {
                body["max_residual"] = json!(r);
            }
            with_config(&a, body)
        },
        || polynomial_csv(&poly),
    )
}
