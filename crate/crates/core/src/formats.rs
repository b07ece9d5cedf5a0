//! Text encodings shared by the CLI and the Python bindings.
//!
//! CSV numbers are written as `{:.16e}` (17 significant digits, `.` separator),
//! which round-trips every `f64`. Rows are `\n`-terminated and headers are fixed
//! per table, so equal inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::flows::{BoundaryResidual, FieldSample, Trajectory};
use crate::nls::GridField;
use crate::oscillators::SpectrumTable;
use crate::qschrodinger::{BivarPolynomial, RootSlice};

/// Fixed 17-significant-digit rendering; non-finite values print as `NaN`/`inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Minimal CSV builder for numeric tables.
#[derive(Debug, Clone)]
pub struct Csv {
    buf: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self {
            buf,
            width: header.len(),
        }
    }

    /// Appends one row; panics if the cell count disagrees with the header.
    pub fn row<I, S>(&mut self, cells: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut count = 0;
        for (k, c) in cells.into_iter().enumerate() {
            if k > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(c.as_ref());
            count += 1;
        }
        assert_eq!(count, self.width, "CSV row width mismatch");
        self.buf.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn spectrum_json(table: &SpectrumTable) -> Value {
    json!({
        "model": table.model,
        "formula": table.formula,
        "params": table.params,
        "levels": table.levels,
    })
}

pub fn spectrum_csv(table: &SpectrumTable) -> String {
    let mut csv = Csv::new(&["n", "energy"]);
    for l in &table.levels {
        csv.row([l.n.to_string(), num(l.energy)]);
    }
    csv.finish()
}

/// `{"params": {..}, "terms": [{"i", "j", "re", "im"}]}`, terms sorted by `(i, j)`.
///
/// `params` holds `hbar`, `m`, `lambda` from the polynomial plus any `extra` entries.
pub fn polynomial_json(poly: &BivarPolynomial, extra: &BTreeMap<String, f64>) -> Value {
    let mut params = extra.clone();
    params.insert("hbar".into(), poly.params.hbar);
    params.insert("m".into(), poly.params.m);
    params.insert("lambda".into(), poly.params.lambda);
    // BTreeMap iteration is already (i, j)-ordered
    let terms: Vec<Value> = poly
        .terms()
        .map(|((i, j), c)| json!({"i": i, "j": j, "re": c.re, "im": c.im}))
        .collect();
    json!({"params": params, "terms": terms})
}

pub fn polynomial_csv(poly: &BivarPolynomial) -> String {
    let mut csv = Csv::new(&["i", "j", "re", "im"]);
    for ((i, j), c) in poly.terms() {
        csv.row([i.to_string(), j.to_string(), num(c.re), num(c.im)]);
    }
    csv.finish()
}

/// One row per root: `t, k, re, im`.
pub fn roots_csv(slices: &[RootSlice]) -> String {
    let mut csv = Csv::new(&["t", "k", "re", "im"]);
    for s in slices {
        for (k, r) in s.roots.iter().enumerate() {
            csv.row([num(s.t), k.to_string(), num(r.re), num(r.im)]);
        }
    }
    csv.finish()
}

pub fn grid_field_csv(field: &GridField) -> String {
    let mut csv = Csv::new(&["x", "re_psi", "im_psi", "re_psibar", "im_psibar"]);
    for ((x, p), q) in field.xs().into_iter().zip(&field.psi).zip(&field.psibar) {
        csv.row([num(x), num(p.re), num(p.im), num(q.re), num(q.im)]);
    }
    csv.finish()
}

/// Masked rows keep their coordinates and carry `NaN` values.
pub fn field_csv(samples: &[FieldSample]) -> String {
    let mut csv = Csv::new(&["re_z", "im_z", "re_F", "im_F", "re_V", "im_V", "masked"]);
    let nan = f64::NAN;
    for s in samples {
        let f = s.f.unwrap_or(crate::C64::new(nan, nan));
        let v = s.v.unwrap_or(crate::C64::new(nan, nan));
        csv.row([
            num(s.z.re),
            num(s.z.im),
            num(f.re),
            num(f.im),
            num(v.re),
            num(v.im),
            u8::from(s.masked).to_string(),
        ]);
    }
    csv.finish()
}

pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut csv = Csv::new(&["t", "re_z", "im_z", "J", "H"]);
    for p in &tr.points {
        csv.row([num(p.t), num(p.z.re), num(p.z.im), num(p.j), num(p.h)]);
    }
    csv.finish()
}

pub fn residuals_json(residuals: &[BoundaryResidual]) -> Value {
    serde_json::to_value(residuals).expect("residuals serialize")
}

pub fn residuals_csv(residuals: &[BoundaryResidual]) -> String {
    let mut csv = Csv::new(&["boundary_id", "stddev_imF", "samples", "truncation_M"]);
    for r in residuals {
        csv.row([
            r.boundary_id.clone(),
            num(r.stddev_im_f),
            r.samples.to_string(),
            r.truncation_m.map(|m| m.to_string()).unwrap_or_default(),
        ]);
    }
    csv.finish()
}

/// Flat `key,value` CSV for scalar reports.
pub fn key_value_csv<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut csv = Csv::new(&["key", "value"]);
    for (k, v) in pairs {
        csv.row([k.to_string(), v]);
    }
    csv.finish()
}

/// Renders a JSON value with a trailing newline.
pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    let _ = writeln!(s);
    s
}
