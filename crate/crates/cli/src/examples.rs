//! The three worked examples: synthesis from a curvature profile, the
//! construction over a cusped directrix, and the secant curve.

use std::path::PathBuf;

use desitter_core::catalog::{
    cusp_directrix, cusp_directrix_raw, cusp_rectifying_raw, hyperbolic_torsion_profile, secant_curve, secant_directrix,
};
use desitter_core::curve::ARC_PANELS;
use desitter_core::{
    apex_conditions, construct_rectifying, fit_ratio_form, frames_on, recover_apex, reextract_frames,
    synthesize_from_curvatures, ArcLengthMap, EtaProfile, FramedSample, Point, Vec4f,
};

use crate::error::{CliError, Result};
use crate::export::{export_curve, CurveRecord, Format, Meta};
use crate::projection::ProjectionSpec;

/// Number of evaluation points for the parametric exports.
pub const EXPORT_SAMPLES: usize = 1601;
/// Parameter range of the cusped curve exports.
pub const CUSP_EXPORT_RANGE: (f64, f64) = (-4.0, 4.0);
/// Arc-length parameter range of the construction checks over the cusped
/// directrix, inside its first half-arch.
pub const CUSP_CHECK_RANGE: (f64, f64) = (0.1, 0.8);
/// Frames sampled along the construction for the apex checks.
pub const CUSP_FRAMES: usize = 301;
/// `|cos t|` below which the secant curve is not sampled.
pub const SECANT_COS_MIN: f64 = 0.05;

pub const FIT_TOL: f64 = 1e-4;
pub const ROUND_TRIP_TOL: f64 = 1e-5;
pub const APEX_RESIDUAL_TOL: f64 = 1e-5;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const MEMBERSHIP_TOL: f64 = 1e-9;
pub const FRAME_DRIFT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    Synthesis,
    CuspCone,
    Secant,
}

impl std::str::FromStr for ExampleId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4.1" => Ok(ExampleId::Synthesis),
            "4.2" => Ok(ExampleId::CuspCone),
            "4.3" => Ok(ExampleId::Secant),
            other => Err(CliError::UnknownExample(other.to_string())),
        }
    }
}

impl ExampleId {
    pub fn label(self) -> &'static str {
        match self {
            ExampleId::Synthesis => "4.1",
            ExampleId::CuspCone => "4.2",
            ExampleId::Secant => "4.3",
        }
    }

    fn stem(self) -> &'static str {
        match self {
            ExampleId::Synthesis => "example_4_1",
            ExampleId::CuspCone => "example_4_2",
            ExampleId::Secant => "example_4_3",
        }
    }

    /// Pole opposite the apex region: `(0,−1,0,0)` for the first two,
    /// `(0,0,0,−1)` for the secant curve.
    pub fn default_projection(self) -> ProjectionSpec {
        match self {
            ExampleId::Secant => ProjectionSpec { pole_axis: 4, pole_sign: 1 },
            _ => ProjectionSpec { pole_axis: 2, pole_sign: 1 },
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleOptions {
    pub out_dir: PathBuf,
    /// Synthesis step for 4.1.
    pub step: f64,
    /// Data format; an SVG is always written alongside.
    pub format: Format,
    pub projection: Option<ProjectionSpec>,
}

impl ExampleOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        ExampleOptions { out_dir: out_dir.into(), step: 1e-3, format: Format::Csv, projection: None }
    }
}

/// A measured quantity with its pass condition.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: &str, value: f64, tol: f64) -> Self {
        Check { name: name.to_string(), value, tol, pass: value < tol }
    }

    fn flag(name: &str, ok: bool) -> Self {
        Check { name: name.to_string(), value: if ok { 1.0 } else { 0.0 }, tol: 1.0, pass: ok }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ExampleReport {
    pub id: &'static str,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Writer<'a> {
    opts: &'a ExampleOptions,
    projection: ProjectionSpec,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn emit(&mut self, name: &str, parameter: &str, records: &[CurveRecord]) -> Result<()> {
        let meta = Meta { name: name.to_string(), parameter: parameter.to_string(), count: 0, note: None };
        for format in [self.opts.format, Format::Svg] {
            let path = self.opts.out_dir.join(format!("{name}.{}", format.extension()));
            export_curve(records, &path, format, &meta, &self.projection)?;
            if !self.files.contains(&path) {
                self.files.push(path);
            }
        }
        Ok(())
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn max_membership_error(records: &[CurveRecord]) -> f64 {
    records.iter().fold(0.0, |m, r| m.max((r.vec().norm_sq() - 1.0).abs()))
}

/// Runs one example, writing its files into `opts.out_dir`.
pub fn run_example(id: ExampleId, opts: &ExampleOptions) -> Result<ExampleReport> {
    std::fs::create_dir_all(&opts.out_dir).map_err(crate::error::io_err(&opts.out_dir))?;
    let mut w = Writer { opts, projection: opts.projection.unwrap_or(id.default_projection()), files: Vec::new() };
    let checks = match id {
        ExampleId::Synthesis => synthesis(&mut w, id.stem())?,
        ExampleId::CuspCone => cusp_cone(&mut w, id.stem())?,
        ExampleId::Secant => secant(&mut w, id.stem())?,
    };
    Ok(ExampleReport { id: id.label(), checks, files: w.files })
}

fn synthesis(w: &mut Writer, stem: &str) -> Result<Vec<Check>> {
    let profile = hyperbolic_torsion_profile::<f64>();
    let init = FramedSample::canonical(0.0, profile.kappa(0.0), profile.tau(0.0));
    let samples = synthesize_from_curvatures(&profile, &init, (-1.0, 1.0), w.opts.step)?;
    let back = reextract_frames(&samples)?;
    let fit = fit_ratio_form(&back)?;
    let round_trip = back
        .iter()
        .map(|f| (f.kappa_g - profile.kappa(f.s)).abs().max((f.tau_g - profile.tau(f.s)).abs()))
        .fold(0.0, f64::max);
    let drift = samples.iter().map(|f| f.relative_gram_error()).fold(0.0, f64::max);
    let records: Vec<CurveRecord> = back.iter().map(CurveRecord::from).collect();
    w.emit(stem, "s", &records)?;
    Ok(vec![
        Check::below("sinh_coeff_error", (fit.sinh_coeff - 0.2).abs(), FIT_TOL),
        Check::below("cosh_coeff_error", (fit.cosh_coeff - 0.2).abs(), FIT_TOL),
        Check::flag("admissible", fit.admissible),
        Check::below("fit_rms", fit.residual_rms, FIT_TOL),
        Check::below("round_trip_error", round_trip, ROUND_TRIP_TOL),
        Check::below("frame_drift", drift, FRAME_DRIFT_TOL),
        Check::below("membership_error", max_membership_error(&records), MEMBERSHIP_TOL),
    ])
}

/// The printed value of the constructed curve at the origin.
pub fn cusp_alpha_at_zero() -> Vec4f {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Vec4f::new(15.0 / 8.0 * r, r, 17.0 / 8.0 * r, 0.0)
}

fn cusp_cone(w: &mut Writer, stem: &str) -> Result<Vec<Check>> {
    let p = Point::new(Vec4f::basis(1))?;
    let eta = EtaProfile::new(1.0, 0.0)?;
    let [e0, ..]: [f64; 4] = desitter_core::EtaFunction::jet(&eta, 0.0);
    let g0 = cusp_directrix_raw::<f64>((-1.0, 1.0)).eval(0.0);
    let alpha0 = p.vec() * e0.cos() + g0 * e0.sin();
    let closed_form = (alpha0 - cusp_alpha_at_zero()).max_abs();

    let alpha = construct_rectifying(&p, &cusp_directrix(), eta, CUSP_CHECK_RANGE)?;
    let map = ArcLengthMap::new(&alpha, ARC_PANELS)?;
    let frames = frames_on(&map, 0.0, map.total_length(), CUSP_FRAMES)?;
    let report = apex_conditions(&frames, &p)?;
    let (found, _) = recover_apex(&frames)?;
    let fit = fit_ratio_form(&frames)?;

    let (lo, hi) = CUSP_EXPORT_RANGE;
    let raw_alpha = cusp_rectifying_raw::<f64>(CUSP_EXPORT_RANGE);
    let raw_gamma = cusp_directrix_raw::<f64>(CUSP_EXPORT_RANGE);
    let alpha_records: Vec<CurveRecord> =
        grid(lo, hi, EXPORT_SAMPLES).map(|t| CurveRecord::point(t, raw_alpha.eval(t))).collect();
    let gamma_records: Vec<CurveRecord> =
        grid(lo, hi, EXPORT_SAMPLES).map(|t| CurveRecord::point(t, raw_gamma.eval(t))).collect();
    let framed: Vec<CurveRecord> = frames.iter().map(CurveRecord::from).collect();
    w.emit(&format!("{stem}_alpha"), "t", &alpha_records)?;
    w.emit(&format!("{stem}_gamma"), "t", &gamma_records)?;
    w.emit(&format!("{stem}_rectifying"), "s", &framed)?;
    Ok(vec![
        Check::below("alpha_zero_error", closed_form, CLOSED_FORM_TOL),
        Check::below("apex_max_residual", report.max_residual(), APEX_RESIDUAL_TOL),
        Check::flag("apex_boundary", report.boundary.holds()),
        Check::below("recovered_apex_error", (found.vec() - p.vec()).max_abs(), APEX_RESIDUAL_TOL),
        Check::below("ratio_fit_rms", fit.residual_rms, FIT_TOL),
        Check::flag("ratio_admissible", fit.admissible),
        Check::below(
            "membership_error",
            max_membership_error(&alpha_records).max(max_membership_error(&gamma_records)),
            MEMBERSHIP_TOL,
        ),
    ])
}

fn secant(w: &mut Writer, stem: &str) -> Result<Vec<Check>> {
    let edge = SECANT_COS_MIN.acos();
    let alpha = secant_curve::<f64>((-edge, edge));
    let gamma = secant_directrix::<f64>((-edge, edge));
    let alpha_records: Vec<CurveRecord> =
        grid(-edge, edge, EXPORT_SAMPLES).map(|t| CurveRecord::point(t, alpha.eval(t))).collect();
    let gamma_records: Vec<CurveRecord> =
        grid(-edge, edge, EXPORT_SAMPLES).map(|t| CurveRecord::point(t, gamma.eval(t))).collect();
    let checks = vec![
        Check::below("alpha_membership_error", max_membership_error(&alpha_records), MEMBERSHIP_TOL),
        Check::below("gamma_membership_error", max_membership_error(&gamma_records), MEMBERSHIP_TOL),
    ];
    w.emit(&format!("{stem}_alpha"), "t", &alpha_records)?;
    w.emit(&format!("{stem}_gamma"), "t", &gamma_records)?;
    Ok(checks)
}
