use clap::{Args, ValueEnum};
use qosc::flows::{
    annulus_bohr_sommerfeld, annulus_f_spectrum, annulus_level_window, AnnulusSpec,
    DEFAULT_TRUNCATION,
};
use qosc::formats::{spectrum_csv, spectrum_json};
use qosc::oscillators::{
    golden_spectrum, semi_relativistic_spectrum, sym_q_spectrum, SemiRelVariant,
};
use serde::Serialize;

use crate::common::{domain, series_control, with_config, CliError, OutputArgs};

/// Largest table the CLI will build.
const MAX_LEVELS: u64 = 100_000;
const DEFAULT_N_MAX: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Model {
    #[value(name = "sym_q")]
    #[serde(rename = "sym_q")]
    SymQ,
    #[value(name = "semirel")]
    #[serde(rename = "semirel")]
    SemiRel,
    #[value(name = "golden")]
    #[serde(rename = "golden")]
    Golden,
    #[value(name = "annulus_bs")]
    #[serde(rename = "annulus_bs")]
    AnnulusBs,
    #[value(name = "annulus_f")]
    #[serde(rename = "annulus_f")]
    AnnulusF,
}

impl Model {
    fn is_annulus(self) -> bool {
        matches!(self, Model::AnnulusBs | Model::AnnulusF)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sum,
    Difference,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Highest level (default 10; annulus models default to the last level inside the annulus).
    #[arg(long)]
    n_max: Option<u64>,
    /// Lowest level; annulus models only (default: first level inside the annulus).
    #[arg(long)]
    n_min: Option<u64>,
    /// Deformation parameter of sym_q.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    /// semirel level rule: (H(n)+H(n+1))/2 or (H(n+1)-H(n))/2.
    #[arg(long, value_enum, default_value_t = Variant::Sum)]
    variant: Variant,
    /// Energy unit of the golden oscillator.
    #[arg(long, default_value_t = 1.0)]
    hbar_omega: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    r1: f64,
    #[arg(long, default_value_t = 2.0)]
    r2: f64,
    /// Image truncation M of the annulus lattice.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u32,
    /// Action quantum s in J = s (n + 1/2) or J = s n.
    #[arg(long, default_value_t = 1.0)]
    action_scale: f64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutputArgs,
}

fn check_n_max(n: u64) -> Result<u64, CliError> {
    if n > MAX_LEVELS {
        Err(domain(format!("n-max {n} exceeds {MAX_LEVELS}")))
    } else {
        Ok(n)
    }
}

pub fn run(mut a: SpectrumArgs) -> Result<(), CliError> {
    if a.n_min.is_some() && !a.model.is_annulus() {
        return Err(CliError::Usage(
            "--n-min applies only to annulus models".into(),
        ));
    }
    let table = match a.model {
        Model::SymQ => {
            let n = check_n_max(*a.n_max.get_or_insert(DEFAULT_N_MAX))?;
            sym_q_spectrum(a.lambda, n)?
        }
        Model::SemiRel => {
            let n = check_n_max(*a.n_max.get_or_insert(DEFAULT_N_MAX))?;
            let v = match a.variant {
                Variant::Sum => SemiRelVariant::Sum,
                Variant::Difference => SemiRelVariant::Difference,
            };
            semi_relativistic_spectrum(a.m, a.c, a.omega0, n, v)?
        }
        Model::Golden => {
            let n = check_n_max(*a.n_max.get_or_insert(DEFAULT_N_MAX))?;
            if !(a.hbar_omega > 0.0 && a.hbar_omega.is_finite()) {
                return Err(domain("hbar-omega must be positive"));
            }
            golden_spectrum(n, a.hbar_omega)
        }
        Model::AnnulusBs | Model::AnnulusF => {
            let spec = AnnulusSpec::new(a.r1, a.r2, a.truncation)?;
            if !(a.action_scale > 0.0) {
                return Err(domain("action scale must be positive"));
            }
            let bs = a.model == Model::AnnulusBs;
            let window = annulus_level_window(&spec, a.action_scale, bs);
            let (lo, hi) = match (a.n_min, a.n_max, window) {
                (Some(lo), Some(hi), _) => (lo, hi),
                (lo, hi, Some((wl, wh))) => (lo.unwrap_or(wl), hi.unwrap_or(wh)),
                _ => return Err(domain("no quantized action fits inside the annulus")),
            };
            if lo > hi {
                return Err(domain(format!("empty level range {lo}..={hi}")));
            }
            check_n_max(hi - lo)?;
            (a.n_min, a.n_max) = (Some(lo), Some(hi));
            let ctl = series_control();
            if bs {
                annulus_bohr_sommerfeld((lo, hi), a.gamma, &spec, a.action_scale, &ctl)?
            } else {
                annulus_f_spectrum((lo, hi), a.gamma, &spec, a.action_scale, &ctl)?
            }
        }
    };
    a.out.emit(
        || with_config(&a, spectrum_json(&table)),
        || spectrum_csv(&table),
    )
}
