//! Timelike conical surfaces `Φ(u,v) = cos(v)·p + sin(v)·γ(u)` over a
//! unit-speed timelike directrix `γ` in S²₁ ⊂ T_pS³₁.

use crate::curve::{CurveJet, ParamCurve};
use crate::diff::{derivative, grid_derivative};
use crate::error::{GeometryError, Result};
use crate::minkowski::{det4, wedge3, PointOnS13, Vec4};
use crate::scalar::Real;

/// `v` closer than this to `0` or `π` is the apex or its antipode.
pub const APEX_TOL: f64 = 1e-9;
/// Largest residual accepted by [`is_geodesic_on_cone`].
pub const GEODESIC_RESIDUAL_TOL: f64 = 1e-4;
/// `c² = λ₁² − λ₂² + 1` tolerance.
pub const PARAM_TOL: f64 = 1e-12;
/// Closest approach of the `atanh` argument to `±1`.
pub const ATANH_CLAMP: f64 = 1e-12;

/// Jet of `cos(η)·p + sin(η)·g` from the jet `[η, η', η'', η''']` and the
/// jet of `g`.
pub fn exp_jet<T: Real>(p: &Vec4<T>, eta: [T; 4], g: &CurveJet<T>) -> CurveJet<T> {
    let [e, e1, e2, e3] = eta;
    let (s, c) = e.sin_cos();
    let three = T::lit(3.0);
    let cs = [c, -s * e1, -c * e1 * e1 - s * e2, s * e1 * e1 * e1 - three * c * e1 * e2 - s * e3];
    let sn = [s, c * e1, -s * e1 * e1 + c * e2, -c * e1 * e1 * e1 - three * s * e1 * e2 + c * e3];
    CurveJet {
        value: *p * cs[0] + g.value * sn[0],
        d1: *p * cs[1] + g.value * sn[1] + g.d1 * sn[0],
        d2: *p * cs[2] + g.value * sn[2] + g.d1 * (T::lit(2.0) * sn[1]) + g.d2 * sn[0],
        d3: *p * cs[3] + g.value * sn[3] + g.d1 * (three * sn[2]) + g.d2 * (three * sn[1]) + g.d3 * sn[0],
    }
}

/// Cone with apex `p` over the directrix `γ`.
#[derive(Clone, Debug)]
pub struct ConicalSurface<T> {
    pub apex: PointOnS13<T>,
    pub directrix: ParamCurve<T>,
}

/// First fundamental form and unit normal at one chart point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalForm<T> {
    pub e: T,
    pub f: T,
    pub g: T,
    /// `ξ = −Nγ(u)`.
    pub xi: Vec4<T>,
    pub phi_u: Vec4<T>,
    pub phi_v: Vec4<T>,
}

/// Curvatures at one chart point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceCurvatures<T> {
    /// Gaussian curvature, identically 1.
    pub k: T,
    /// Mean curvature `κγ(u)/(2 sin v)`.
    pub h: T,
    /// `1 + det(S)` with the shape operator `S` from finite differences.
    pub k_shape: T,
    /// `tr(S)/2` from finite differences.
    pub h_shape: T,
    /// `−f_vv/f` with `f = √|E|`.
    pub k_intrinsic: T,
}

impl<T: Real> ConicalSurface<T> {
    pub fn new(apex: PointOnS13<T>, directrix: ParamCurve<T>) -> Self {
        ConicalSurface { apex, directrix }
    }

    fn check_v(v: T) -> Result<()> {
        let tol = T::tol(APEX_TOL);
        if !(v > tol && v < T::PI() - tol) {
            return Err(GeometryError::ApexSingularity { v: v.as_f64() });
        }
        Ok(())
    }

    fn phi(&self, u: T, v: T) -> Vec4<T> {
        self.apex.vec() * v.cos() + self.directrix.eval(u) * v.sin()
    }

    /// `Φ(u,v) = cos(v)·p + sin(v)·γ(u)` for `0 < v < π`.
    pub fn evaluate(&self, u: T, v: T) -> Result<Vec4<T>> {
        Self::check_v(v)?;
        Ok(self.phi(u, v))
    }

    /// `Nγ(u) = p × γ × γ'/‖γ'‖`.
    pub fn directrix_normal(&self, u: T) -> Vec4<T> {
        let j = self.directrix.jet(u);
        let t = j.d1 / j.d1.norm();
        wedge3(&self.apex.vec(), &j.value, &t)
    }

    /// `κγ(u) = det(γ, γ', γ'', p)/‖γ'‖³`.
    pub fn kappa_gamma(&self, u: T) -> T {
        let j = self.directrix.jet(u);
        let v = j.d1.norm();
        det4(&j.value, &j.d1, &j.d2, &self.apex.vec()) / (v * v * v)
    }

    /// `Φu = sin v·γ'(u)`, `Φv = −sin v·p + cos v·γ(u)`.
    fn partials(&self, u: T, v: T) -> (Vec4<T>, Vec4<T>) {
        let j = self.directrix.jet(u);
        (j.d1 * v.sin(), j.value * v.cos() - self.apex.vec() * v.sin())
    }

    /// `(E, F, G)` from the partials of `Φ` built on the directrix jet, and
    /// `ξ = −Nγ(u)`.
    pub fn fundamental_form_and_normal(&self, u: T, v: T) -> Result<FundamentalForm<T>> {
        Self::check_v(v)?;
        let (pu, pv) = self.partials(u, v);
        Ok(FundamentalForm {
            e: pu.norm_sq(),
            f: pu.dot(&pv),
            g: pv.norm_sq(),
            xi: -self.directrix_normal(u),
            phi_u: pu,
            phi_v: pv,
        })
    }

    /// `K = 1` and `H = κγ(u)/(2 sin v)`, with finite-difference cross-checks.
    pub fn curvatures(&self, u: T, v: T) -> Result<SurfaceCurvatures<T>> {
        let ff = self.fundamental_form_and_normal(u, v)?;
        let xi = ff.xi;
        let l = derivative(|x| self.phi(x, v), u, 2).dot(&xi);
        let m = derivative(|y| derivative(|x| self.phi(x, y), u, 1), v, 1).dot(&xi);
        let n = derivative(|y| self.phi(u, y), v, 2).dot(&xi);
        let det_i = ff.e * ff.g - ff.f * ff.f;
        let det_ii = l * n - m * m;
        let two = T::lit(2.0);
        let trace = (l * ff.g - two * m * ff.f + n * ff.e) / det_i;
        let f_of = |y: T| self.partials(u, y).0.norm();
        let k_intrinsic = -derivative(f_of, v, 2) / f_of(v);
        Ok(SurfaceCurvatures {
            k: T::one(),
            h: self.kappa_gamma(u) / (two * v.sin()),
            k_shape: T::one() + det_ii / det_i,
            h_shape: trace / two,
            k_intrinsic,
        })
    }
}

/// Constants of the closed-form cone geodesic
/// `v = arccos(λ₁ sinh(s+s₀) + λ₂ cosh(s+s₀))`,
/// `u = atanh(λ₁λ₂/c + (1+λ₁²)/c · tanh(s+s₀))`, `c² = λ₁² − λ₂² + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeGeodesicParams<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub s0: T,
    pub c: T,
}

impl<T: Real> ConeGeodesicParams<T> {
    /// Takes `c = ±√(λ₁² − λ₂² + 1)`, positive unless `negative_c`.
    pub fn new(lambda1: T, lambda2: T, s0: T, negative_c: bool) -> Result<Self> {
        let c2 = lambda1 * lambda1 - lambda2 * lambda2 + T::one();
        if !(c2 > T::zero()) {
            return Err(GeometryError::InvalidParameter(format!("λ₁² − λ₂² + 1 = {} must be positive", c2.as_f64())));
        }
        let c = if negative_c { -c2.sqrt() } else { c2.sqrt() };
        Ok(ConeGeodesicParams { lambda1, lambda2, s0, c })
    }

    /// Checks `c² = λ₁² − λ₂² + 1` for an explicit `c`.
    pub fn with_c(lambda1: T, lambda2: T, s0: T, c: T) -> Result<Self> {
        let c2 = lambda1 * lambda1 - lambda2 * lambda2 + T::one();
        if c == T::zero() || !((c * c - c2).abs() <= T::tol(PARAM_TOL)) {
            return Err(GeometryError::InvalidParameter(format!(
                "c² = {} but λ₁² − λ₂² + 1 = {}",
                (c * c).as_f64(),
                c2.as_f64()
            )));
        }
        Ok(ConeGeodesicParams { lambda1, lambda2, s0, c })
    }

    /// `(μ₁, μ₂) = (−λ₂/c, −λ₁/c)`.
    pub fn ratio_coefficients(&self) -> (T, T) {
        (-self.lambda2 / self.c, -self.lambda1 / self.c)
    }

    fn w(&self, s: T) -> (T, T) {
        let x = s + self.s0;
        let (sh, ch) = (x.sinh(), x.cosh());
        (self.lambda1 * sh + self.lambda2 * ch, self.lambda1 * ch + self.lambda2 * sh)
    }

    fn z(&self, s: T) -> (T, T, T) {
        let x = s + self.s0;
        let th = x.tanh();
        let b = (T::one() + self.lambda1 * self.lambda1) / self.c;
        let sech2 = T::one() - th * th;
        (self.lambda1 * self.lambda2 / self.c + b * th, b * sech2, -T::lit(2.0) * b * sech2 * th)
    }

    /// `(v, v', v'')` at `s`.
    pub fn v_jet(&self, s: T) -> Result<(T, T, T)> {
        let (w, w1) = self.w(s);
        if !(w.abs() < T::one()) {
            return Err(GeometryError::DomainExit { s: s.as_f64() });
        }
        let r2 = T::one() - w * w;
        let r = r2.sqrt();
        Ok((w.acos(), -w1 / r, -w / r - w * w1 * w1 / (r2 * r)))
    }

    /// `(u, u', u'')` at `s`.
    pub fn u_jet(&self, s: T) -> Result<(T, T, T)> {
        let (z, z1, z2) = self.z(s);
        let edge = T::one() - T::lit(ATANH_CLAMP);
        if !(z.abs() < T::one() + T::lit(ATANH_CLAMP)) {
            return Err(GeometryError::DomainExit { s: s.as_f64() });
        }
        let z = z.max(-edge).min(edge);
        let q = T::one() - z * z;
        Ok((z.atanh(), z1 / q, z2 / q + T::lit(2.0) * z * z1 * z1 / (q * q)))
    }
}

/// One point of a closed-form cone geodesic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeGeodesicSample<T> {
    pub s: T,
    pub u: T,
    pub v: T,
    pub du: T,
    pub dv: T,
}

impl<T: Real> ConeGeodesicSample<T> {
    /// `−(u')²·sin²v + (v')² + 1`, zero for unit speed.
    pub fn speed_residual(&self) -> T {
        let sv = self.v.sin();
        -(self.du * self.du) * sv * sv + self.dv * self.dv + T::one()
    }
}

/// Samples `(u(s), v(s))` on the grid `s_lo + k·step` up to `s_hi`.
pub fn cone_geodesic_closed_form<T: Real>(
    params: &ConeGeodesicParams<T>,
    s_range: (T, T),
    step: T,
) -> Result<Vec<ConeGeodesicSample<T>>> {
    if !(step > T::zero()) || !(s_range.1 >= s_range.0) {
        return Err(GeometryError::InvalidParameter("need step > 0 and s_lo ≤ s_hi".into()));
    }
    let n = ((s_range.1 - s_range.0) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    (0..=n)
        .map(|k| {
            let s = s_range.0 + step * T::from_usize(k).unwrap();
            let (v, dv, _) = params.v_jet(s)?;
            let (u, du, _) = params.u_jet(s)?;
            Ok(ConeGeodesicSample { s, u, v, du, dv })
        })
        .collect()
}

/// The cone geodesic `s ↦ Φ(u(s), v(s))` as a curve with a full jet.
pub fn cone_geodesic_curve<T: Real>(
    surface: &ConicalSurface<T>,
    params: &ConeGeodesicParams<T>,
    s_range: (T, T),
) -> ParamCurve<T> {
    let surface = surface.clone();
    let params = *params;
    ParamCurve::from_jet(
        move |s| {
            let nan = (T::nan(), T::nan(), T::nan());
            let (u, u1, u2) = params.u_jet(s).unwrap_or(nan);
            let (v, v1, v2) = params.v_jet(s).unwrap_or(nan);
            let u3 = derivative(|x| params.u_jet(x).map(|j| j.2).unwrap_or(T::nan()), s, 1);
            let v3 = derivative(|x| params.v_jet(x).map(|j| j.2).unwrap_or(T::nan()), s, 1);
            let g = surface.directrix.jet(u).compose(u1, u2, u3);
            exp_jet(&surface.apex.vec(), [v, v1, v2, v3], &g)
        },
        s_range,
    )
}

/// Residuals of a path `(u, v, s)` against the cone geodesic equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeGeodesicTest<T> {
    pub is_geodesic: bool,
    /// Largest of the three residuals below.
    pub max_residual: T,
    /// `max |u'' + 2u'v' cot v|`.
    pub ode_u: T,
    /// `max |v'' + (u')² sin v cos v|`.
    pub ode_v: T,
    /// Largest tangential component of `∇̄_T T`.
    pub tangential: T,
    /// `max |−(u')² sin²v + (v')² + 1|`, reported only.
    pub speed: T,
}

/// Tests whether a path on the cone, sampled uniformly in its arc length,
/// solves the geodesic equations
/// `u'' + 2u'v' cot v = 0`, `v'' + (u')² sin v cos v = 0`
/// and has no tangential acceleration in S³₁.
pub fn is_geodesic_on_cone<T: Real>(surface: &ConicalSurface<T>, path: &[(T, T, T)]) -> Result<ConeGeodesicTest<T>> {
    let n = path.len();
    if n < 5 {
        return Err(GeometryError::InsufficientSamples { found: n, required: 5 });
    }
    let h = (path[n - 1].2 - path[0].2) / T::from_usize(n - 1).unwrap();
    if !(h > T::zero()) || path.windows(2).any(|w| ((w[1].2 - w[0].2) - h).abs() > T::lit(1e-6) * h) {
        return Err(GeometryError::InvalidParameter("path must be uniform in s".into()));
    }
    let u: Vec<T> = path.iter().map(|x| x.0).collect();
    let v: Vec<T> = path.iter().map(|x| x.1).collect();
    for &vi in &v {
        ConicalSurface::<T>::check_v(vi)?;
    }
    let u1 = grid_derivative(&u, h, 1);
    let u2 = grid_derivative(&u1, h, 1);
    let v1 = grid_derivative(&v, h, 1);
    let v2 = grid_derivative(&v1, h, 1);
    let alpha: Vec<Vec4<T>> = path.iter().map(|&(a, b, _)| surface.phi(a, b)).collect();
    let acc = grid_derivative(&grid_derivative(&alpha, h, 1), h, 1);
    let two = T::lit(2.0);
    let (mut ode_u, mut ode_v, mut tangential, mut speed) = (T::zero(), T::zero(), T::zero(), T::zero());
    for i in 0..n {
        let (sv, cv) = v[i].sin_cos();
        ode_u = ode_u.max((u2[i] + two * u1[i] * v1[i] * cv / sv).abs());
        ode_v = ode_v.max((v2[i] + u1[i] * u1[i] * sv * cv).abs());
        speed = speed.max((-(u1[i] * u1[i]) * sv * sv + v1[i] * v1[i] + T::one()).abs());
        let a = acc[i] - alpha[i] * acc[i].dot(&alpha[i]);
        let (pu, pv) = surface.partials(u[i], v[i]);
        let cu = a.dot(&pu) / pu.norm();
        let cvv = a.dot(&pv) / pv.norm();
        tangential = tangential.max(cu.abs()).max(cvv.abs());
    }
    let max_residual = ode_u.max(ode_v).max(tangential);
    Ok(ConeGeodesicTest {
        is_geodesic: max_residual < T::lit(GEODESIC_RESIDUAL_TOL),
        max_residual,
        ode_u,
        ode_v,
        tangential,
        speed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::frames_along;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    const R: f64 = 0.6;

    pub(crate) fn small_circle_cone(q: f64) -> ConicalSurface<f64> {
        let gamma =
            ParamCurve::new(move |t: f64| Vec4::new(R * (t / R).sinh(), 0.0, R * (t / R).cosh(), q), (-3.0, 3.0))
                .with_derivative(|t: f64| Vec4::new((t / R).cosh(), 0.0, (t / R).sinh(), 0.0))
                .with_derivative(|t: f64| Vec4::new((t / R).sinh() / R, 0.0, (t / R).cosh() / R, 0.0))
                .with_derivative(|t: f64| Vec4::new((t / R).cosh() / (R * R), 0.0, (t / R).sinh() / (R * R), 0.0));
        ConicalSurface::new(PointOnS13::from_f64([0.0, 1.0, 0.0, 0.0]).unwrap(), gamma)
    }

    #[test]
    fn evaluation_limits() {
        let cone = small_circle_cone(0.8);
        let g = cone.directrix.eval(0.4);
        assert!((cone.evaluate(0.4, FRAC_PI_2).unwrap() - g).max_abs() < 1e-15);
        let near = cone.evaluate(0.4, 1e-7).unwrap();
        assert!((near - cone.apex.vec()).max_abs() < 1e-6);
        assert!(matches!(cone.evaluate(0.0, 0.0), Err(GeometryError::ApexSingularity { .. })));
        assert!(matches!(cone.evaluate(0.0, std::f64::consts::PI), Err(GeometryError::ApexSingularity { .. })));
        assert_abs_diff_eq!(cone.evaluate(0.7, 1.1).unwrap().norm_sq(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn first_fundamental_form() {
        let cone = small_circle_cone(0.8);
        let ff = cone.fundamental_form_and_normal(0.3, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(ff.e, -1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(ff.f, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(ff.g, 1.0, epsilon = 1e-8);
        let ff = cone.fundamental_form_and_normal(-0.2, FRAC_PI_6).unwrap();
        assert_abs_diff_eq!(ff.e, -0.25, epsilon = 1e-8);
        let x = cone.evaluate(-0.2, FRAC_PI_6).unwrap();
        assert_abs_diff_eq!(ff.xi.norm_sq(), 1.0, epsilon = 1e-12);
        for w in [ff.phi_u, ff.phi_v, x] {
            assert_abs_diff_eq!(ff.xi.dot(&w), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn curvatures_of_small_circle_cone() {
        let cone = small_circle_cone(0.8);
        let c = cone.curvatures(0.1, FRAC_PI_2).unwrap();
        assert_eq!(c.k, 1.0);
        assert_abs_diff_eq!(c.h, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.h_shape, 2.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(c.k_shape, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(c.k_intrinsic, 1.0, epsilon = 1e-5);
        let flat = small_circle_cone(0.0);
        let geodesic_directrix = ConicalSurface::new(
            flat.apex,
            ParamCurve::new(|t: f64| Vec4::new(t.sinh(), 0.0, t.cosh(), 0.0), (-1.0, 1.0)),
        );
        let c = geodesic_directrix.curvatures(0.2, FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(c.h, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn degenerate_parameters_give_equator() {
        let params = ConeGeodesicParams::new(0.0, 0.0, 0.25, false).unwrap();
        assert_eq!(params.c, 1.0);
        let out = cone_geodesic_closed_form(&params, (-0.5, 0.5), 0.1).unwrap();
        for g in out {
            assert_abs_diff_eq!(g.v, FRAC_PI_2, epsilon = 1e-15);
            assert_abs_diff_eq!(g.u, g.s + 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn closed_form_is_unit_speed() {
        let params = ConeGeodesicParams::<f64>::new(0.3, 0.1, 0.0, false).unwrap();
        assert_abs_diff_eq!(params.c * params.c, 1.08, epsilon = 1e-15);
        let out = cone_geodesic_closed_form(&params, (-0.5, 0.5), 1e-2).unwrap();
        assert_eq!(out.len(), 101);
        for g in &out {
            assert!(g.speed_residual().abs() < 1e-8);
            assert!(g.du * g.v.sin().powi(2) - params.c < 1e-12);
        }
    }

    #[test]
    fn domain_exit_is_reported() {
        let params = ConeGeodesicParams::<f64>::new(0.3, 0.1, 0.0, false).unwrap();
        match cone_geodesic_closed_form(&params, (0.0, 5.0), 1e-2) {
            Err(GeometryError::DomainExit { s }) => assert!(s > 1.0 && s < 5.0),
            other => panic!("expected DomainExit, got {other:?}"),
        }
        assert!(ConeGeodesicParams::with_c(0.3, 0.1, 0.0, 1.0).is_err());
        assert!(ConeGeodesicParams::new(0.0, 2.0, 0.0, false).is_err());
    }

    fn path_of(params: &ConeGeodesicParams<f64>, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64, f64)> {
        let h = (hi - lo) / (n - 1) as f64;
        cone_geodesic_closed_form(params, (lo, hi), h).unwrap().iter().map(|g| (g.u, g.v, g.s)).collect()
    }

    #[test]
    fn geodesic_test_accepts_closed_form_and_rejects_latitude() {
        let cone = small_circle_cone(-0.8);
        let params = ConeGeodesicParams::<f64>::new(0.3, 0.1, 0.0, false).unwrap();
        let ok = is_geodesic_on_cone(&cone, &path_of(&params, -0.5, 0.5, 501)).unwrap();
        assert!(ok.is_geodesic, "{ok:?}");
        assert!(ok.speed < 1e-8);

        let v = 1.0f64;
        let lat: Vec<_> = (0..201)
            .map(|i| {
                let s = -0.5 + i as f64 * 5e-3;
                (s / v.sin(), v, s)
            })
            .collect();
        let bad = is_geodesic_on_cone(&cone, &lat).unwrap();
        assert!(!bad.is_geodesic);
        assert!(bad.ode_v > 0.1);

        let equator: Vec<_> = (0..201)
            .map(|i| {
                let s = -0.5 + i as f64 * 5e-3;
                (s, FRAC_PI_2, s)
            })
            .collect();
        assert!(is_geodesic_on_cone(&cone, &equator).unwrap().is_geodesic);
    }

    #[test]
    fn cone_geodesic_normal_is_surface_normal() {
        let cone = small_circle_cone(-0.8);
        let params = ConeGeodesicParams::<f64>::new(0.3, 0.1, 0.0, false).unwrap();
        let curve = cone_geodesic_curve(&cone, &params, (-0.5, 0.5));
        let (mu1, mu2) = params.ratio_coefficients();
        for f in frames_along(&curve, 41).unwrap() {
            let s = f.t;
            let (u, du, _) = params.u_jet(s).unwrap();
            let (v, _, _) = params.v_jet(s).unwrap();
            let ff = cone.fundamental_form_and_normal(u, v).unwrap();
            assert!(f.normal.dot(&ff.phi_u).abs() < 1e-5);
            assert!(f.normal.dot(&ff.phi_v).abs() < 1e-5);
            let third = -du * du * cone.kappa_gamma(u) * v.sin();
            assert_abs_diff_eq!(third, f.kappa_g, epsilon = 1e-4);
            let ratio = mu1 * s.sinh() + mu2 * s.cosh();
            assert_abs_diff_eq!(f.tau_g / f.kappa_g, ratio, epsilon = 1e-5);
        }
    }
}
