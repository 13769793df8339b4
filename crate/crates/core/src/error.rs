use thiserror::Error;

/// Failures raised by the geometry routines.
///
/// Numeric payloads are reported in `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("vector has a non-finite component")]
    NonFinite,
    #[error("point is off the unit pseudo-sphere: <x,x> - 1 = {deviation:e}")]
    NotOnSphere { deviation: f64 },
    #[error("vector is not tangent at the base point: <q,u> = {inner:e}")]
    NotTangent { inner: f64 },
    #[error("direction must satisfy <w,w> in {{-1, 0, 1}}, got {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("degenerate frame: vector {index} has <v,v> = {norm_sq:e} after projection")]
    DegenerateFrame { index: usize, norm_sq: f64 },
    #[error("curve is not timelike at t = {t}: <c',c'> = {speed_sq:e}")]
    NotTimelike { t: f64, speed_sq: f64 },
    #[error("curve is not unit speed at t = {t}: <c',c'> = {speed_sq}")]
    NotUnitSpeed { t: f64, speed_sq: f64 },
    #[error("geodesic point at s = {s}: kappa_g = {kappa:e}")]
    GeodesicPoint { s: f64, kappa: f64 },
    #[error("frame drift {drift:e} in one step at s = {s}; reduce the step")]
    FrameDrift { s: f64, drift: f64 },
    #[error("no geodesic joins the points: <p,q> = {inner}")]
    NoGeodesic { inner: f64 },
    #[error("points coincide or are antipodal")]
    Antipodal,
    #[error("curve leaves the pseudo-sphere S^2_1 of the chart at t = {t}: deviation {deviation:e}")]
    NotOnPseudoSphere { t: f64, deviation: f64 },
    #[error("cone parameter v = {v} is at the apex or its antipode")]
    ApexSingularity { v: f64 },
    #[error("closed-form cone geodesic leaves its domain at s = {s}")]
    DomainExit { s: f64 },
    #[error("need at least {required} usable samples, found {found}")]
    InsufficientSamples { found: usize, required: usize },
    #[error("curve is a geodesic: kappa_g vanishes at every sample")]
    GeodesicCurve,
    #[error("apex lies on the curve (distance {distance:e})")]
    ApexOnCurve { distance: f64 },
    #[error("construction is not regular at t = {t}: sin^2(eta) - eta'^2 = {speed_sq:e}")]
    RegularityFailure { t: f64, speed_sq: f64 },
    #[error("curve is planar: the apex is not determined")]
    PlanarDegenerate,
    #[error("curve is not rectifying: apex residual {residual:e}")]
    NotRectifying { residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
