//! `qosc`: reproducible, file-emitting front end to the qosc library.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage, 3 domain, 4 convergence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;
mod flow;
mod nls_check;
mod qpoly;
mod spectrum;
mod vortex;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qosc",
    version,
    about = "q-deformed oscillators, flows and NLS checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energy levels of an oscillator model.
    Spectrum(spectrum::SpectrumArgs),
    /// Polynomial solution H_n of the sinh-dispersion Schrodinger equation, with optional zeros.
    Qpoly(qpoly::QpolyArgs),
    /// Image-method potential flow sampled on a grid, with boundary residuals.
    Flow(flow::FlowArgs),
    /// RK4 trajectory of a point vortex in an annulus.
    VortexSim(vortex::VortexArgs),
    /// Numerical checks of the NLS hierarchy.
    NlsCheck(nls_check::NlsArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(a) => spectrum::run(a),
        Command::Qpoly(a) => qpoly::run(a),
        Command::Flow(a) => flow::run(a),
        Command::VortexSim(a) => vortex::run(a),
        Command::NlsCheck(a) => nls_check::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qosc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
