use std::f64::consts::PI;

use clap::Args;
use qosc::flows::{annulus_omega, vortex_simulate, AnnulusSpec, VortexState, DEFAULT_TRUNCATION};
use qosc::formats::{json_string, trajectory_csv};
use qosc::C64;
use serde::Serialize;
use serde_json::json;

use crate::common::{
    domain, parse_complex, series_control, with_config, write_to, CliError, OutputArgs,
};

const MAX_STEPS: usize = 10_000_000;
/// Step used when the vortex does not rotate (`omega = 0`).
const STATIC_DT: f64 = 1e-3;

#[derive(Debug, Args, Serialize)]
pub struct VortexArgs {
    /// Initial position `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "1.5,0.2", allow_hyphen_values = true)]
    z0: C64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    r1: f64,
    #[arg(long, default_value_t = 2.0)]
    r2: f64,
    /// Image truncation M of the annulus lattice.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u32,
    /// Time step (default: one closed-form period divided by `steps`).
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Record every `stride`-th step.
    #[arg(long, default_value_t = 10)]
    stride: usize,
    /// Also write the conservation report (JSON) here.
    #[arg(long)]
    #[serde(skip)]
    report: Option<String>,
    /// Also write the trajectory (CSV) here.
    #[arg(long)]
    #[serde(skip)]
    trajectory: Option<String>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutputArgs,
}

pub fn run(mut a: VortexArgs) -> Result<(), CliError> {
    let spec = AnnulusSpec::new(a.r1, a.r2, a.truncation)?;
    if !spec.contains(a.z0) {
        return Err(domain(format!(
            "start |z0| = {} is outside the annulus ({}, {})",
            a.z0.norm(),
            a.r1,
            a.r2
        )));
    }
    if a.steps > MAX_STEPS {
        return Err(domain(format!("steps {} exceeds {MAX_STEPS}", a.steps)));
    }
    let ctl = series_control();
    let dt = match a.dt {
        Some(dt) => dt,
        None => {
            let w = annulus_omega(a.z0.norm_sqr(), a.gamma, &spec, &ctl)?;
            if w == 0.0 {
                STATIC_DT
            } else {
                2.0 * PI / w.abs() / a.steps.max(1) as f64
            }
        }
    };
    a.dt = Some(dt);
    let tr = vortex_simulate(
        VortexState {
            z0: a.z0,
            gamma: a.gamma,
        },
        &spec,
        dt,
        a.steps,
        a.stride,
        &ctl,
    )?;

    let report = || {
        with_config(
            &a,
            json!({
                "omega": tr.omega,
                "period_closed_form": tr.period_closed_form,
                "period_measured": tr.period_measured,
                "period_mismatch": (tr.period_measured / tr.period_closed_form - 1.0).abs(),
                "radius_drift": tr.radius_drift,
                "energy_drift": tr.energy_drift,
                "recorded_points": tr.points.len(),
            }),
        )
    };
    if let Some(path) = &a.report {
        write_to(path, &json_string(&report()))?;
    }
    if let Some(path) = &a.trajectory {
        write_to(path, &trajectory_csv(&tr))?;
    }
    a.out.emit(report, || trajectory_csv(&tr))
}
