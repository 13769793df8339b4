//! Geodesics of S³₁: the arc through two points, the exponential map and
//! parallel transport along principal-normal geodesics.

use crate::curve::FramedSample;
use crate::error::{GeometryError, Result};
use crate::minkowski::{PointOnS13, Vec4, CAUSAL_TOL};
use crate::scalar::Real;

/// Tolerance on `⟨p,q⟩ = ±1` and on `⟨w,w⟩ ∈ {−1, 0, 1}`.
pub const BOUNDARY_TOL: f64 = CAUSAL_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeodesicKind {
    /// `cosh(t)·p + sinh(t)·w`, `⟨w,w⟩ = −1`.
    PseudoCircle,
    /// `cos(t)·p + sin(t)·w`, `⟨w,w⟩ = 1`.
    Circle,
    /// `p + t·w`, `⟨w,w⟩ = 0`.
    Line,
}

/// A geodesic through `base` with initial direction `direction`.
///
/// `angle` is the parameter at which the arc reaches the second point it was
/// built from (0 for arcs built from a direction).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicArc<T> {
    pub kind: GeodesicKind,
    pub base: PointOnS13<T>,
    pub direction: Vec4<T>,
    pub angle: T,
}

impl<T: Real> GeodesicArc<T> {
    pub fn eval(&self, t: T) -> Vec4<T> {
        let p = self.base.vec();
        let w = self.direction;
        match self.kind {
            GeodesicKind::PseudoCircle => p * t.cosh() + w * t.sinh(),
            GeodesicKind::Circle => p * t.cos() + w * t.sin(),
            GeodesicKind::Line => p + w * t,
        }
    }

    /// Velocity at `t`.
    pub fn velocity(&self, t: T) -> Vec4<T> {
        let p = self.base.vec();
        let w = self.direction;
        match self.kind {
            GeodesicKind::PseudoCircle => p * t.sinh() + w * t.cosh(),
            GeodesicKind::Circle => w * t.cos() - p * t.sin(),
            GeodesicKind::Line => w,
        }
    }

    /// Arc through `base` with unit or null tangent `w`.
    pub fn from_direction(base: PointOnS13<T>, w: Vec4<T>) -> Result<Self> {
        base.check_tangent(&w)?;
        let q = w.norm_sq();
        let tol = T::tol(BOUNDARY_TOL);
        let kind = if (q + T::one()).abs() <= tol {
            GeodesicKind::PseudoCircle
        } else if (q - T::one()).abs() <= tol {
            GeodesicKind::Circle
        } else if q.abs() <= tol {
            GeodesicKind::Line
        } else {
            return Err(GeometryError::NotNormalized { norm_sq: q.as_f64() });
        };
        Ok(GeodesicArc { kind, base, direction: w, angle: T::zero() })
    }
}

/// The geodesic from `p` through `q`, classified by `d = ⟨p,q⟩`.
///
/// With `ω = q − d·p`: `d > 1` gives a pseudo-circle with angle
/// `arccosh d`, `|d| < 1` a circle with angle `arccos d`, `d = 1` the null
/// line `p + t·ω` reaching `q` at `t = 1`. No geodesic joins the points when
/// `d ≤ −1`.
pub fn geodesic_between<T: Real>(p: &PointOnS13<T>, q: &PointOnS13<T>) -> Result<GeodesicArc<T>> {
    let pv = p.vec();
    let qv = q.vec();
    let tol = T::tol(BOUNDARY_TOL);
    if (qv - pv).max_abs() <= tol || (qv + pv).max_abs() <= tol {
        return Err(GeometryError::Antipodal);
    }
    let d = pv.dot(&qv);
    let omega = qv - pv * d;
    let (kind, direction, angle) = if (d - T::one()).abs() <= tol {
        (GeodesicKind::Line, omega, T::one())
    } else if d > T::one() {
        let r = (d * d - T::one()).sqrt();
        (GeodesicKind::PseudoCircle, omega / r, (d + r).ln())
    } else if d > -T::one() + tol {
        let r = (T::one() - d * d).sqrt();
        (GeodesicKind::Circle, omega / r, d.acos())
    } else {
        return Err(GeometryError::NoGeodesic { inner: d.as_f64() });
    };
    Ok(GeodesicArc { kind, base: *p, direction, angle })
}

/// `exp_p(t·w)` for a tangent `w` with `⟨w,w⟩ ∈ {−1, 0, 1}`.
pub fn exp_map<T: Real>(p: &PointOnS13<T>, w: &Vec4<T>, t: T) -> Result<Vec4<T>> {
    Ok(GeodesicArc::from_direction(*p, *w)?.eval(t))
}

/// Transports `(T, N, B)` of `sample` along the spacelike geodesic
/// `cos(u)·α + sin(u)·N` to parameter `u`.
///
/// `T` and `B` are orthogonal to the geodesic plane and stay fixed; `N`
/// becomes the geodesic's velocity `−sin(u)·α + cos(u)·N`.
pub fn parallel_transport_normal_geodesic<T: Real>(sample: &FramedSample<T>, u: T) -> (Vec4<T>, Vec4<T>, Vec4<T>) {
    let n = sample.normal * u.cos() - sample.alpha * u.sin();
    (sample.tangent, n, sample.binormal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type V = Vec4<f64>;

    fn pt(x: [f64; 4]) -> PointOnS13<f64> {
        PointOnS13::from_f64(x).unwrap()
    }

    #[test]
    fn timelike_plane_case() {
        let p = pt([0.0, 1.0, 0.0, 0.0]);
        let q = pt([1f64.sinh(), 1f64.cosh(), 0.0, 0.0]);
        let g = geodesic_between(&p, &q).unwrap();
        assert_eq!(g.kind, GeodesicKind::PseudoCircle);
        assert_abs_diff_eq!(g.angle, 1.0, epsilon = 1e-12);
        assert!((g.eval(g.angle) - q.vec()).max_abs() < 1e-12);
    }

    #[test]
    fn spacelike_plane_case() {
        let p = pt([0.0, 1.0, 0.0, 0.0]);
        let q = pt([0.0, 0.0, 1.0, 0.0]);
        let g = geodesic_between(&p, &q).unwrap();
        assert_eq!(g.kind, GeodesicKind::Circle);
        assert_abs_diff_eq!(g.angle, std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(g.direction, q.vec());
    }

    #[test]
    fn null_plane_case() {
        let p = pt([0.0, 1.0, 0.0, 0.0]);
        let q = pt([0.5, 1.0, 0.5, 0.0]);
        let g = geodesic_between(&p, &q).unwrap();
        assert_eq!(g.kind, GeodesicKind::Line);
        assert!((g.eval(1.0) - q.vec()).max_abs() < 1e-15);
    }

    #[test]
    fn no_geodesic_below_minus_one() {
        let p = pt([0.0, 1.0, 0.0, 0.0]);
        let q = pt([1f64.sinh(), -1f64.cosh(), 0.0, 0.0]);
        assert!(matches!(geodesic_between(&p, &q), Err(GeometryError::NoGeodesic { .. })));
        assert_eq!(geodesic_between(&p, &p), Err(GeometryError::Antipodal));
        let anti = pt([0.0, -1.0, 0.0, 0.0]);
        assert_eq!(geodesic_between(&p, &anti), Err(GeometryError::Antipodal));
    }

    #[test]
    fn exp_map_cases() {
        let p = pt([0.0, 1.0, 0.0, 0.0]);
        let w = V::basis(2);
        assert!((exp_map(&p, &w, std::f64::consts::FRAC_PI_2).unwrap() - w).max_abs() < 1e-15);
        assert_eq!(exp_map(&p, &V::basis(0), 0.0).unwrap(), p.vec());
        assert!(matches!(exp_map(&p, &(w * 2.0), 1.0), Err(GeometryError::NotNormalized { .. })));
        assert!(matches!(exp_map(&p, &V::basis(1), 1.0), Err(GeometryError::NotTangent { .. })));
    }

    #[test]
    fn transport_quarter_turn() {
        let f = FramedSample::canonical(0.0, 1.0, 0.0);
        let (t, n, b) = parallel_transport_normal_geodesic(&f, std::f64::consts::FRAC_PI_2);
        assert_eq!(t, f.tangent);
        assert_eq!(b, f.binormal);
        assert!((n + f.alpha).max_abs() < 1e-15);
        let (t0, n0, b0) = parallel_transport_normal_geodesic(&f, 0.0);
        assert_eq!((t0, n0, b0), (f.tangent, f.normal, f.binormal));
    }
}
