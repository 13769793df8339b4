//! Timelike curves in De Sitter 3-space S³₁ ⊂ R⁴₁.
//!
//! Everything is generic over the scalar type ([`Real`]: `f32` or `f64`);
//! the aliases at the bottom fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cone;
pub mod curve;
pub mod diff;
pub mod error;
pub mod fit;
pub mod geodesic;
pub mod integrate;
pub mod minkowski;
pub mod pseudosphere;
pub mod rectifying;
pub mod scalar;

pub use cone::{
    cone_geodesic_closed_form, cone_geodesic_curve, exp_jet, is_geodesic_on_cone, ConeGeodesicParams,
    ConeGeodesicSample, ConeGeodesicTest, ConicalSurface, FundamentalForm, SurfaceCurvatures,
};
pub use curve::{
    arclength_reparametrize, frame_at, frame_from_jet, frames_along, frames_from_jets, frames_from_points, frames_on,
    geodesic_curvature, geodesic_torsion, reextract_frames, synthesize_from_curvatures, ArcLengthMap, CurvatureProfile,
    CurveJet, FramedSample, ParamCurve,
};
pub use error::{GeometryError, Result};
pub use fit::SinhCoshFit;
pub use geodesic::{exp_map, geodesic_between, parallel_transport_normal_geodesic, GeodesicArc, GeodesicKind};
pub use minkowski::{
    causal_character, det4, lorentz_dot, reorthonormalize_frame, tangent_cross, wedge3, CausalCharacter, PointOnS13,
    Vec4,
};
pub use pseudosphere::{sabban_frame, spiral_curvature, synthesize_directrix, SabbanSample, TangentSphereChart};
pub use rectifying::{
    apex_conditions, apex_conditions_with_tol, construct_rectifying, corollary_roundtrip, extremal_check,
    fit_ratio_form, recover_apex, ApexReport, CorollaryReport, EtaFn, EtaFunction, EtaProfile, ExtremalReport,
    RatioFit, Verdict,
};
pub use scalar::Real;

pub type Vec4f = Vec4<f64>;
pub type Point = PointOnS13<f64>;
pub type Curve = ParamCurve<f64>;
pub type Sample = FramedSample<f64>;
pub type Profile = CurvatureProfile<f64>;
pub type Geodesic = GeodesicArc<f64>;
pub type Chart = TangentSphereChart<f64>;
pub type Sabban = SabbanSample<f64>;
pub type Cone = ConicalSurface<f64>;
pub type ConeParams = ConeGeodesicParams<f64>;
pub type Fit = RatioFit<f64>;
pub type Apex = ApexReport<f64>;
pub type Eta = EtaProfile<f64>;
