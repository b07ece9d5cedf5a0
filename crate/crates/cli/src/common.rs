use std::fs;
use std::io::{self, Write};

use clap::{Args, ValueEnum};
use qosc::formats::json_string;
use qosc::qcalc::SeriesControl;
use qosc::C64;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qosc::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_convergence() => 4,
            CliError::Core(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

pub fn domain(msg: impl Into<String>) -> CliError {
    CliError::Core(qosc::Error::Domain(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Destination file; `-` is standard output.
    #[arg(long, default_value = "-")]
    pub output: String,
}

impl OutputArgs {
    /// Writes the JSON or CSV rendering, whichever `--format` selects.
    pub fn emit(
        &self,
        json: impl FnOnce() -> Value,
        csv: impl FnOnce() -> String,
    ) -> Result<(), CliError> {
        let text = match self.format {
            Format::Json => json_string(&json()),
            Format::Csv => csv(),
        };
        write_to(&self.output, &text)
    }
}

pub fn write_to(path: &str, text: &str) -> Result<(), CliError> {
    let res = if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush())
    } else {
        fs::write(path, text)
    };
    res.map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

/// `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number {t:?}: {e}"))
    };
    let z = match s.split_once(',') {
        Some((re, im)) => C64::new(parse(re)?, parse(im)?),
        None => C64::new(parse(s)?, 0.0),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite value {s:?}"))
    }
}

/// `{"config": <args>, ...body}`: every report echoes the resolved flags.
pub fn with_config<T: Serialize>(config: &T, body: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert(
        "config".into(),
        serde_json::to_value(config).expect("flags serialize"),
    );
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

pub fn series_control() -> SeriesControl {
    SeriesControl::from_env()
}
