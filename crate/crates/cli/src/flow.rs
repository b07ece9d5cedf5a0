use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use qosc::flows::{
    arc_residual, base_dipole, base_uniform, base_vortex, circle_residual, circular_wedge,
    double_circular_wedge, one_circle, ray_residual, sample_field, two_circle, wedge, AnnulusSpec,
    BoundaryResidual, ComplexPotential, FieldGrid, BOUNDARY_SAMPLES, DEFAULT_TRUNCATION,
};
use qosc::formats::{field_csv, json_string, residuals_json};
use qosc::C64;
use serde::Serialize;
use serde_json::json;

use crate::common::{domain, parse_complex, with_config, write_to, CliError, OutputArgs};

const MAX_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Circle,
    Wedge,
    #[value(name = "circular_wedge")]
    CircularWedge,
    Annulus,
    #[value(name = "double_wedge")]
    DoubleWedge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Vortex,
    Uniform,
    Dipole,
}

#[derive(Debug, Args, Serialize)]
pub struct FlowArgs {
    #[arg(long, value_enum)]
    domain: Domain,
    /// Free-space flow placed in the domain.
    #[arg(long, value_enum, default_value_t = Base::Vortex)]
    base: Base,
    /// Position `re,im` of the vortex or dipole (default depends on the domain).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z0: Option<C64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Uniform stream coefficient `re,im` in F = U z.
    #[arg(long, value_parser = parse_complex, default_value = "1,0", allow_hyphen_values = true)]
    u: C64,
    /// Dipole moment `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "1,0", allow_hyphen_values = true)]
    mu: C64,
    /// Wedge opening is pi / n.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Radius of the circle or of the wedge's arc.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    r1: f64,
    #[arg(long, default_value_t = 2.0)]
    r2: f64,
    /// Image truncation M of the annulus lattice.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u32,
    #[arg(long, allow_hyphen_values = true)]
    re_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    re_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    im_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    im_max: Option<f64>,
    #[arg(long, default_value_t = 41)]
    nx: usize,
    #[arg(long, default_value_t = 41)]
    ny: usize,
    /// Points per boundary piece in the residual report.
    #[arg(long, default_value_t = BOUNDARY_SAMPLES)]
    samples: usize,
    /// Also write the residual report (JSON) here.
    #[arg(long)]
    #[serde(skip)]
    report: Option<String>,
    /// Also write the field samples (CSV) here.
    #[arg(long)]
    #[serde(skip)]
    field: Option<String>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutputArgs,
}

impl FlowArgs {
    fn alpha(&self) -> f64 {
        PI / f64::from(self.n)
    }

    fn default_z0(&self) -> C64 {
        let a = self.alpha();
        let mid = (self.r1 * self.r2).sqrt();
        match self.domain {
            Domain::Circle => C64::new(1.5 * self.r, 0.5 * self.r),
            Domain::Wedge => C64::from_polar(1.3, 0.4 * a),
            Domain::CircularWedge => C64::from_polar(1.5 * self.r, 0.4 * a),
            Domain::Annulus => C64::from_polar(mid, 0.7),
            Domain::DoubleWedge => C64::from_polar(mid, 0.4 * a),
        }
    }

    /// Half-width of the default sampling window.
    fn default_extent(&self) -> f64 {
        match self.domain {
            Domain::Circle | Domain::CircularWedge => 3.0 * self.r,
            Domain::Wedge => 3.0,
            Domain::Annulus | Domain::DoubleWedge => self.r2,
        }
    }
}

fn in_wedge(z: C64, alpha: f64) -> bool {
    let t = z.arg();
    z.norm() > 0.0 && t > 0.0 && t < alpha
}

/// Rejects sources that sit outside (or on the boundary of) the flow domain.
fn check_source(a: &FlowArgs, z0: C64, spec: Option<&AnnulusSpec>) -> Result<(), CliError> {
    let alpha = a.alpha();
    let ok = match a.domain {
        Domain::Circle => z0.norm() > a.r,
        Domain::Wedge => in_wedge(z0, alpha),
        Domain::CircularWedge => in_wedge(z0, alpha) && z0.norm() != a.r,
        Domain::Annulus => spec.is_some_and(|s| s.contains(z0)),
        Domain::DoubleWedge => spec.is_some_and(|s| s.contains(z0)) && in_wedge(z0, alpha),
    };
    if ok {
        Ok(())
    } else {
        let name = a
            .domain
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        Err(domain(format!(
            "source at {z0} lies outside the {name} domain"
        )))
    }
}

fn residuals(
    a: &FlowArgs,
    f: &ComplexPotential,
    z0: C64,
    spec: Option<&AnnulusSpec>,
) -> Result<Vec<BoundaryResidual>, CliError> {
    let (alpha, k) = (a.alpha(), a.samples);
    let rays = |span: (f64, f64)| -> Result<Vec<BoundaryResidual>, CliError> {
        Ok(vec![
            ray_residual(f, "ray0", 0.0, span, k)?,
            ray_residual(f, "ray1", alpha, span, k)?,
        ])
    };
    let out = match a.domain {
        Domain::Circle => vec![circle_residual(f, "circle", a.r, k, None)?],
        Domain::Wedge => rays((0.1, 10.0))?,
        Domain::CircularWedge => {
            // the side of the arc that holds the source
            let span = if a.base == Base::Uniform || z0.norm() > a.r {
                (a.r, 10.0 * a.r)
            } else {
                (0.01 * a.r, a.r)
            };
            let mut v = rays(span)?;
            v.push(arc_residual(f, "arc", a.r, (0.0, alpha), k, None)?);
            v
        }
        Domain::Annulus => {
            let s = spec.expect("annulus spec");
            let m = Some(s.m_trunc);
            vec![
                circle_residual(f, "inner", s.r1, k, m)?,
                circle_residual(f, "outer", s.r2, k, m)?,
            ]
        }
        Domain::DoubleWedge => {
            let s = spec.expect("annulus spec");
            let m = Some(s.m_trunc);
            let mut v: Vec<BoundaryResidual> = rays((s.r1, s.r2))?
                .into_iter()
                .map(|r| BoundaryResidual {
                    truncation_m: m,
                    ..r
                })
                .collect();
            v.push(arc_residual(f, "inner", s.r1, (0.0, alpha), k, m)?);
            v.push(arc_residual(f, "outer", s.r2, (0.0, alpha), k, m)?);
            v
        }
    };
    Ok(out)
}

pub fn run(mut a: FlowArgs) -> Result<(), CliError> {
    if a.n == 0 {
        return Err(domain("wedge index n must be at least 1"));
    }
    if a.samples < 2 || a.nx == 0 || a.ny == 0 || a.nx > MAX_GRID || a.ny > MAX_GRID {
        return Err(domain(format!(
            "need samples >= 2 and 1 <= nx, ny <= {MAX_GRID}"
        )));
    }
    let annular = matches!(a.domain, Domain::Annulus | Domain::DoubleWedge);
    let spec = if annular {
        Some(AnnulusSpec::new(a.r1, a.r2, a.truncation)?)
    } else {
        None
    };
    if annular && a.base == Base::Uniform {
        return Err(domain(
            "a uniform stream has no convergent annulus image series",
        ));
    }
    let z0 = *a.z0.get_or_insert(a.default_z0());
    if a.base != Base::Uniform {
        check_source(&a, z0, spec.as_ref())?;
    }
    let ext = a.default_extent();
    let (re_min, re_max) = (*a.re_min.get_or_insert(-ext), *a.re_max.get_or_insert(ext));
    let (im_min, im_max) = (*a.im_min.get_or_insert(-ext), *a.im_max.get_or_insert(ext));
    if !(re_min < re_max && im_min < im_max) {
        return Err(domain("sampling window must have min < max"));
    }

    let base = match a.base {
        Base::Vortex => base_vortex(z0, a.gamma),
        Base::Uniform => base_uniform(a.u),
        Base::Dipole => base_dipole(z0, a.mu),
    };
    let f = match a.domain {
        Domain::Circle => one_circle(&base, a.r)?,
        Domain::Wedge => wedge(&base, a.n)?,
        Domain::CircularWedge => circular_wedge(&base, a.n, a.r)?,
        Domain::Annulus => two_circle(&base, spec.as_ref().expect("annulus spec")),
        Domain::DoubleWedge => {
            double_circular_wedge(&base, a.n, spec.as_ref().expect("annulus spec"))?
        }
    };
    let res = residuals(&a, &f, z0, spec.as_ref())?;
    let grid = FieldGrid {
        re: (re_min, re_max),
        im: (im_min, im_max),
        nx: a.nx,
        ny: a.ny,
    };
    let samples = sample_field(&f, &grid);
    let masked = samples.iter().filter(|s| s.masked).count();
    let max_stddev = res.iter().map(|r| r.stddev_im_f).fold(0.0, f64::max);

    let report = || {
        with_config(
            &a,
            json!({
                "residuals": residuals_json(&res),
                "max_stddev_imF": max_stddev,
                "grid_points": samples.len(),
                "masked_points": masked,
            }),
        )
    };
    if let Some(path) = &a.report {
        write_to(path, &json_string(&report()))?;
    }
    if let Some(path) = &a.field {
        write_to(path, &field_csv(&samples))?;
    }
    a.out.emit(report, || field_csv(&samples))
}
