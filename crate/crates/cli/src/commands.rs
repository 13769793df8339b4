//! Command implementations behind the binary, independent of argument
//! parsing.

use desitter_core::catalog::{cusp_directrix, small_circle_directrix};
use desitter_core::curve::ARC_PANELS;
use desitter_core::{
    apex_conditions_with_tol, cone_geodesic_curve, construct_rectifying, corollary_roundtrip, fit_ratio_form, frame_at,
    frames_from_points, frames_on, recover_apex, synthesize_from_curvatures, ApexReport, ArcLengthMap, Cone,
    ConeParams, CurvatureProfile, EtaProfile, FramedSample, GeometryError, Point, RatioFit, Sample, Vec4f,
};

use crate::error::{CliError, Result};
use crate::export::{check_membership, CurveRecord};
use crate::projection::ProjectionSpec;

/// Frames of records on a uniform grid in `s` when every record carries one,
/// otherwise in `t`. Arc length starts at the first record's `s`, or at 0.
fn frames_of(records: &[CurveRecord]) -> Result<Vec<Sample>> {
    check_membership(records)?;
    let by_s: Option<Vec<f64>> = records.iter().map(|r| r.s).collect();
    let grid = by_s.clone().unwrap_or_else(|| records.iter().map(|r| r.t).collect());
    let x: Vec<Vec4f> = records.iter().map(CurveRecord::vec).collect();
    let s0 = by_s.map_or(0.0, |s| s[0]);
    let frames = frames_from_points(&grid, &x)?;
    Ok(frames.into_iter().zip(records).map(|(f, r)| FramedSample { t: r.t, s: f.s + s0, ..f }).collect())
}

/// Frames and curvatures of a sampled curve.
pub fn frame_points(records: &[CurveRecord]) -> Result<Vec<CurveRecord>> {
    Ok(frames_of(records)?.iter().map(CurveRecord::from).collect())
}

/// `κg = kappa`, `τg = tau + tau_sinh·sinh s + tau_cosh·cosh s`, integrated
/// from the canonical frame at `s = 0` (or the range start if 0 is outside).
pub fn synthesize(
    kappa: f64,
    tau: f64,
    tau_sinh: f64,
    tau_cosh: f64,
    range: (f64, f64),
    step: f64,
) -> Result<Vec<Sample>> {
    let profile = CurvatureProfile::new(move |_| kappa, move |s: f64| tau + tau_sinh * s.sinh() + tau_cosh * s.cosh());
    let s0 = if range.0 <= 0.0 && 0.0 <= range.1 { 0.0 } else { range.0 };
    let init = FramedSample::canonical(s0, profile.kappa(s0), profile.tau(s0));
    Ok(synthesize_from_curvatures(&profile, &init, range, step)?)
}

#[derive(Clone, Debug)]
pub struct RectifyingCheck {
    pub fit: RatioFit<f64>,
    pub apex: Option<ApexReport<f64>>,
    /// Apex recovered from the normals with its RMS residual, or why not.
    pub recovered: std::result::Result<(Point, f64), GeometryError>,
}

impl RectifyingCheck {
    /// The ratio fit is rectifying and, when an apex was given, every apex
    /// condition holds for it.
    pub fn verdict(&self) -> bool {
        self.fit.rectifying && self.apex.as_ref().map_or(true, |a| a.verdict.holds())
    }
}

/// Ratio test, optional apex conditions and apex recovery for a sampled
/// curve. Frames are recomputed from the points.
pub fn check_rectifying(records: &[CurveRecord], apex: Option<Vec4f>, tol: f64) -> Result<RectifyingCheck> {
    let frames = frames_of(records)?;
    let fit = fit_ratio_form(&frames)?;
    let apex =
        apex.map(|p| -> Result<_> { Ok(apex_conditions_with_tol(&frames, &Point::new(p)?, tol)?) }).transpose()?;
    Ok(RectifyingCheck { fit, apex, recovered: recover_apex(&frames) })
}

/// `α = cos η·e2 + sin η·γ` with `η = arctan(a sech(t + t0))`.
///
/// With `kappa0` the directrix is synthesized from the spiral curvature that
/// makes `κg ≡ |kappa0|`; otherwise it is the cusped directrix in arc length.
pub fn construct(a: f64, t0: f64, kappa0: Option<f64>, range: (f64, f64), step: f64) -> Result<Vec<Sample>> {
    if let Some(k0) = kappa0 {
        return Ok(corollary_roundtrip(a, t0, k0, range, step)?.samples);
    }
    let p = Point::new(Vec4f::basis(1))?;
    let alpha = construct_rectifying(&p, &cusp_directrix(), EtaProfile::new(a, t0)?, range)?;
    let map = ArcLengthMap::new(&alpha, ARC_PANELS)?;
    let count = sample_count(map.total_length(), step)?;
    Ok(frames_on(&map, 0.0, map.total_length(), count)?)
}

fn sample_count(length: f64, step: f64) -> Result<usize> {
    if !(step > 0.0) {
        return Err(CliError::Usage("step must be positive".into()));
    }
    Ok(((length / step).round() as usize).max(8) + 1)
}

#[derive(Clone, Debug)]
pub struct ConeGeodesicRun {
    pub params: ConeParams,
    pub samples: Vec<Sample>,
    pub fit: RatioFit<f64>,
}

/// The closed-form cone geodesic over the directrix
/// `(r sinh(t/r), 0, r cosh(t/r), q)`, `r = √(1 − q²)`, apex `e2`,
/// framed on a uniform arc-length grid.
pub fn cone_geodesic(params: ConeParams, q: f64, range: (f64, f64), step: f64) -> Result<ConeGeodesicRun> {
    if !(q.abs() < 1.0) || q == 0.0 {
        return Err(CliError::Usage("directrix height q must satisfy 0 < |q| < 1".into()));
    }
    let r = (1.0 - q * q).sqrt();
    let cone = Cone::new(Point::new(Vec4f::basis(1))?, small_circle_directrix(r, q, (-1e3, 1e3)));
    let curve = cone_geodesic_curve(&cone, &params, range);
    let count = sample_count(range.1 - range.0, step)?;
    let h = (range.1 - range.0) / (count - 1) as f64;
    let samples =
        (0..count).map(|i| frame_at(&curve, range.0 + h * i as f64)).collect::<std::result::Result<Vec<_>, _>>()?;
    let fit = fit_ratio_form(&samples)?;
    Ok(ConeGeodesicRun { params, samples, fit })
}

/// Projected coordinates `(t, y1, y2, y3)` of each record.
pub fn project(records: &[CurveRecord], spec: &ProjectionSpec) -> Result<Vec<(f64, [f64; 3])>> {
    check_membership(records)?;
    records.iter().map(|r| Ok((r.t, spec.project(&r.vec())?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthesized_circle_is_checked_rectifying() {
        let samples = synthesize(1.0, 0.0, 0.0, 0.0, (-1.0, 1.0), 1e-2).unwrap();
        assert_eq!(samples.len(), 201);
        let records: Vec<CurveRecord> = samples.iter().map(CurveRecord::from).collect();
        let framed = frame_points(&records).unwrap();
        assert!(framed.iter().all(|r| (r.kappa_g.unwrap() - 1.0).abs() < 1e-4));
        let check = check_rectifying(&records, Some(Vec4f::basis(3)), 1e-4).unwrap();
        assert!(check.verdict());
        assert_eq!(check.recovered.unwrap_err(), GeometryError::PlanarDegenerate);
    }

    #[test]
    fn cone_geodesic_ratio_matches_parameters() {
        let run = cone_geodesic(ConeParams::new(0.3, 0.1, 0.0, false).unwrap(), -0.8, (-0.5, 0.5), 5e-3).unwrap();
        let (mu1, mu2) = run.params.ratio_coefficients();
        assert!((run.fit.sinh_coeff - mu1).abs() < 1e-6 && (run.fit.cosh_coeff - mu2).abs() < 1e-6);
    }

    #[test]
    fn construction_spiral_and_cusp() {
        let spiral = construct(1.0, 0.0, Some(2.0), (-1.0, 1.0), 1e-3).unwrap();
        assert!(spiral.iter().all(|f| (f.kappa_g - 2.0).abs() < 1e-3));
        let cusp = construct(1.0, 0.0, None, (0.1, 0.8), 1e-2).unwrap();
        assert!(cusp.len() > 8);
        assert!(construct(1.0, 0.0, None, (0.1, 0.8), 0.0).is_err());
    }

    #[test]
    fn projection_of_records() {
        let recs = [CurveRecord::point(0.5, Vec4f::basis(1))];
        let out = project(&recs, &ProjectionSpec::default()).unwrap();
        assert_eq!(out, vec![(0.5, [0.0; 3])]);
    }
}
