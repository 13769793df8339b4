//! Timelike curves in S³₁: parametrized curves, arc length, the
//! curve-hypersurface frame `{α, T, N, B}` and synthesis from curvatures.

use std::fmt;
use std::sync::Arc;

use crate::diff::{derivative_with_step, grid_lsq_derivative, grid_lsq_derivative_of_order};
use crate::error::{GeometryError, Result};
use crate::integrate::{grid_through, rk4_step, State};
use crate::minkowski::{
    det4, gram_error, relative_gram_error, reorthonormalize, wedge3, PointOnS13, Vec4, FRAME_SIGNATURES,
};
use crate::scalar::Real;

/// `κg` below this is treated as zero.
pub const TOL_GEODESIC: f64 = 1e-7;
/// Gram tolerance for frames produced by extraction or synthesis.
pub const TOL_FRAME: f64 = 1e-8;
/// Largest Gram error tolerated before projection in one integration step.
pub const MAX_STEP_DRIFT: f64 = 1e-3;
/// `⟨c',c'⟩` must stay below `−TOL_TIMELIKE` for a timelike curve.
pub const TOL_TIMELIKE: f64 = 1e-12;
/// Panels used by [`ArcLengthMap`].
pub const ARC_PANELS: usize = 256;
/// Half width, in arc length, of the least-squares window of [`reextract_frames`].
pub const LSQ_HALF_WIDTH: f64 = 0.15;
/// Polynomial degree of the least-squares window of [`reextract_frames`].
pub const LSQ_DEGREE: usize = 10;

pub type PointFn<T> = Arc<dyn Fn(T) -> Vec4<T> + Send + Sync>;
pub type JetFn<T> = Arc<dyn Fn(T) -> CurveJet<T> + Send + Sync>;
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Position and its first three derivatives at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet<T> {
    pub value: Vec4<T>,
    pub d1: Vec4<T>,
    pub d2: Vec4<T>,
    pub d3: Vec4<T>,
}

impl<T: Real> CurveJet<T> {
    /// Jet of `c(t(s))` from the jet of `c` at `t(s)` and the derivatives
    /// `t1, t2, t3` of the parameter change.
    pub fn compose(&self, t1: T, t2: T, t3: T) -> Self {
        let three = T::lit(3.0);
        CurveJet {
            value: self.value,
            d1: self.d1 * t1,
            d2: self.d2 * (t1 * t1) + self.d1 * t2,
            d3: self.d3 * (t1 * t1 * t1) + self.d2 * (three * t1 * t2) + self.d1 * t3,
        }
    }

    /// Euclidean speed `√(−⟨c',c'⟩)` and its first two parameter
    /// derivatives, for a timelike jet.
    pub fn speed_derivatives(&self) -> (T, T, T) {
        let v = (-self.d1.norm_sq()).sqrt();
        let v1 = -self.d1.dot(&self.d2) / v;
        let v2 = (-self.d2.norm_sq() - self.d1.dot(&self.d3) - v1 * v1) / v;
        (v, v1, v2)
    }

    /// Jet with respect to arc length.
    pub fn to_arc_length(&self) -> Self {
        let (v, v1, v2) = self.speed_derivatives();
        let t1 = T::one() / v;
        let t2 = -v1 / (v * v * v);
        let t3 = (T::lit(3.0) * v1 * v1 - v2 * v) / v.powi(5);
        self.compose(t1, t2, t3)
    }
}

/// A parametrized curve `t ↦ α(t)` in S³₁.
///
/// Derivatives come from, in order of preference: a full jet evaluator, the
/// analytic derivative evaluators that were supplied, or central differences
/// of the highest-order analytic one.
#[derive(Clone)]
pub struct ParamCurve<T> {
    position: PointFn<T>,
    derivatives: Vec<PointFn<T>>,
    jet: Option<JetFn<T>>,
    domain: (T, T),
    step: T,
}

impl<T: fmt::Debug> fmt::Debug for ParamCurve<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamCurve")
            .field("domain", &self.domain)
            .field("step", &self.step)
            .field("analytic_orders", &if self.jet.is_some() { 3 } else { self.derivatives.len() })
            .finish()
    }
}

impl<T: Real> ParamCurve<T> {
    pub fn new(position: impl Fn(T) -> Vec4<T> + Send + Sync + 'static, domain: (T, T)) -> Self {
        ParamCurve {
            position: Arc::new(position),
            derivatives: Vec::new(),
            jet: None,
            domain,
            step: crate::diff::default_step(1),
        }
    }

    /// Curve whose every derivative comes from `jet`.
    pub fn from_jet(jet: impl Fn(T) -> CurveJet<T> + Send + Sync + 'static, domain: (T, T)) -> Self {
        let jet: JetFn<T> = Arc::new(jet);
        let pos = jet.clone();
        ParamCurve {
            position: Arc::new(move |t| pos(t).value),
            derivatives: Vec::new(),
            jet: Some(jet),
            domain,
            step: crate::diff::default_step(1),
        }
    }

    /// Adds the analytic derivative of the next order (at most three).
    pub fn with_derivative(mut self, d: impl Fn(T) -> Vec4<T> + Send + Sync + 'static) -> Self {
        assert!(self.derivatives.len() < 3, "at most three analytic derivatives");
        self.derivatives.push(Arc::new(d));
        self
    }

    /// Sets the first-derivative difference step; higher orders use ten times it.
    pub fn with_step(mut self, h: T) -> Self {
        self.step = h;
        self
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn analytic_orders(&self) -> usize {
        if self.jet.is_some() {
            3
        } else {
            self.derivatives.len()
        }
    }

    #[inline]
    pub fn eval(&self, t: T) -> Vec4<T> {
        (self.position)(t)
    }

    /// Evaluates and checks S³₁ membership.
    pub fn point(&self, t: T) -> Result<PointOnS13<T>> {
        PointOnS13::new(self.eval(t))
    }

    /// Derivative of order 0–3.
    pub fn derivative(&self, t: T, order: u8) -> Vec4<T> {
        if order == 0 {
            return self.eval(t);
        }
        if let Some(jet) = &self.jet {
            let j = jet(t);
            return match order {
                1 => j.d1,
                2 => j.d2,
                _ => j.d3,
            };
        }
        let k = self.derivatives.len();
        let order_us = order as usize;
        if order_us <= k {
            return (self.derivatives[order_us - 1])(t);
        }
        let base: &PointFn<T> = if k == 0 { &self.position } else { &self.derivatives[k - 1] };
        let m = (order_us - k) as u8;
        let h = if m == 1 { self.step } else { self.step * T::lit(10.0) };
        derivative_with_step(|x| base(x), t, m, h)
    }

    pub fn jet(&self, t: T) -> CurveJet<T> {
        if let Some(jet) = &self.jet {
            return jet(t);
        }
        CurveJet {
            value: self.eval(t),
            d1: self.derivative(t, 1),
            d2: self.derivative(t, 2),
            d3: self.derivative(t, 3),
        }
    }

    /// `⟨c'(t), c'(t)⟩`.
    pub fn speed_sq(&self, t: T) -> T {
        self.derivative(t, 1).norm_sq()
    }
}

#[allow(clippy::excessive_precision)]
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// Arc length `s(t) = ∫ √(−⟨c',c'⟩)` of a timelike curve from `t_min`, with
/// its inverse.
#[derive(Clone, Debug)]
pub struct ArcLengthMap<T> {
    curve: ParamCurve<T>,
    knots_t: Vec<T>,
    knots_s: Vec<T>,
}

impl<T: Real> ArcLengthMap<T> {
    /// Tabulates the arc length over `panels` Gauss–Legendre panels.
    ///
    /// Fails with `NotTimelike` if `⟨c',c'⟩ ≥ −tol` at any quadrature node
    /// or panel end.
    pub fn new(curve: &ParamCurve<T>, panels: usize) -> Result<Self> {
        let (a, b) = curve.domain;
        if !(b > a) || panels == 0 {
            return Err(GeometryError::InvalidParameter("empty curve domain".into()));
        }
        let width = (b - a) / T::from_usize(panels).unwrap();
        let mut knots_t = Vec::with_capacity(panels + 1);
        let mut knots_s = Vec::with_capacity(panels + 1);
        let mut s = T::zero();
        for k in 0..=panels {
            let t = if k == panels { b } else { a + width * T::from_usize(k).unwrap() };
            timelike_speed(curve, t)?;
            knots_t.push(t);
            knots_s.push(s);
            if k < panels {
                s = s + gauss_speed_integral(curve, t, t + width)?;
            }
        }
        Ok(ArcLengthMap { curve: curve.clone(), knots_t, knots_s })
    }

    pub fn total_length(&self) -> T {
        *self.knots_s.last().unwrap()
    }

    pub fn curve(&self) -> &ParamCurve<T> {
        &self.curve
    }

    fn panel_of_t(&self, t: T) -> usize {
        let n = self.knots_t.len() - 1;
        self.knots_t.partition_point(|&k| k <= t).saturating_sub(1).min(n - 1)
    }

    /// Arc length at parameter `t`.
    pub fn arc_length_at(&self, t: T) -> T {
        let i = self.panel_of_t(t);
        let t0 = self.knots_t[i];
        self.knots_s[i] + gauss_speed_integral(&self.curve, t0, t).unwrap_or_else(|_| T::nan())
    }

    /// Parameter `t` with `s(t) = s`, by Newton iteration inside a panel.
    pub fn param_at(&self, s: T) -> T {
        let n = self.knots_s.len() - 1;
        let i = self.knots_s.partition_point(|&k| k <= s).saturating_sub(1).min(n - 1);
        let (t0, t1) = (self.knots_t[i], self.knots_t[i + 1]);
        let (s0, s1) = (self.knots_s[i], self.knots_s[i + 1]);
        let mut t = t0 + (t1 - t0) * (s - s0) / (s1 - s0);
        for _ in 0..50 {
            let speed = (-self.curve.speed_sq(t)).sqrt();
            let f = s0 + gauss_speed_integral(&self.curve, t0, t).unwrap_or(T::nan()) - s;
            let dt = f / speed;
            t = t - dt;
            if dt.abs() <= T::epsilon() * T::lit(4.0) * (T::one() + t.abs()) {
                break;
            }
        }
        t
    }

    /// The curve reparametrized by arc length on `[0, L]`.
    pub fn reparametrized(&self) -> ParamCurve<T> {
        let map = Arc::new(self.clone());
        let length = self.total_length();
        ParamCurve::from_jet(
            move |s| {
                let t = map.param_at(s);
                map.curve.jet(t).to_arc_length()
            },
            (T::zero(), length),
        )
    }
}

fn timelike_speed<T: Real>(curve: &ParamCurve<T>, t: T) -> Result<T> {
    let q = curve.speed_sq(t);
    if !(q < -T::tol(TOL_TIMELIKE)) {
        return Err(GeometryError::NotTimelike { t: t.as_f64(), speed_sq: q.as_f64() });
    }
    Ok((-q).sqrt())
}

fn gauss_speed_integral<T: Real>(curve: &ParamCurve<T>, a: T, b: T) -> Result<T> {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let mut acc = T::zero();
    for &(x, w) in &GL8 {
        acc = acc + T::lit(w) * timelike_speed(curve, mid + half * T::lit(x))?;
    }
    Ok(acc * half)
}

/// Reparametrizes a timelike curve by arc length, `s = 0` at `t_min`.
pub fn arclength_reparametrize<T: Real>(c: &ParamCurve<T>) -> Result<ParamCurve<T>> {
    Ok(ArcLengthMap::new(c, ARC_PANELS)?.reparametrized())
}

/// Point of a timelike curve with its curve-hypersurface frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramedSample<T> {
    /// Parameter of the source curve.
    pub t: T,
    /// Arc length.
    pub s: T,
    pub alpha: Vec4<T>,
    pub tangent: Vec4<T>,
    pub normal: Vec4<T>,
    pub binormal: Vec4<T>,
    pub kappa_g: T,
    pub tau_g: T,
}

impl<T: Real> FramedSample<T> {
    pub fn frame(&self) -> [Vec4<T>; 4] {
        [self.alpha, self.tangent, self.normal, self.binormal]
    }

    pub fn with_frame(mut self, frame: [Vec4<T>; 4]) -> Self {
        [self.alpha, self.tangent, self.normal, self.binormal] = frame;
        self
    }

    /// Largest deviation of the frame Gram matrix from `diag(1, −1, 1, 1)`.
    pub fn gram_error(&self) -> T {
        gram_error(&self.frame(), &FRAME_SIGNATURES)
    }

    /// Gram deviation scaled by the Euclidean sizes of the frame vectors.
    pub fn relative_gram_error(&self) -> T {
        relative_gram_error(&self.frame(), &FRAME_SIGNATURES)
    }

    /// Largest deviation of `B` from `α × T × N`.
    pub fn orientation_error(&self) -> T {
        (wedge3(&self.alpha, &self.tangent, &self.normal) - self.binormal).max_abs()
    }

    /// Canonical frame `α = e2, T = e1, N = e3, B = e4` at `s`.
    pub fn canonical(s: T, kappa_g: T, tau_g: T) -> Self {
        FramedSample {
            t: s,
            s,
            alpha: Vec4::basis(1),
            tangent: Vec4::basis(0),
            normal: Vec4::basis(2),
            binormal: Vec4::basis(3),
            kappa_g,
            tau_g,
        }
    }
}

/// Frame and curvatures from a jet in any regular timelike parametrization.
///
/// `t` is the jet's parameter, `s` the arc length recorded in the sample.
pub fn frame_from_jet<T: Real>(jet: &CurveJet<T>, t: T, s: T) -> Result<FramedSample<T>> {
    let CurveJet { value: alpha, d1, d2, d3 } = *jet;
    if !(alpha.is_finite() && d1.is_finite() && d2.is_finite() && d3.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let speed_sq = d1.norm_sq();
    if !(speed_sq < -T::tol(TOL_TIMELIKE)) {
        return Err(GeometryError::NotTimelike { t: t.as_f64(), speed_sq: speed_sq.as_f64() });
    }
    let v2 = -speed_sq;
    let v = v2.sqrt();
    let tangent = d1 / v;
    let dt_ds = d2 / v2 + d1 * (d1.dot(&d2) / (v2 * v2));
    let k = dt_ds - alpha;
    let kappa = k.norm();
    if !(kappa > T::tol(TOL_GEODESIC)) {
        return Err(GeometryError::GeodesicPoint { s: s.as_f64(), kappa: kappa.as_f64() });
    }
    let normal = k / kappa;
    let binormal = wedge3(&alpha, &tangent, &normal);
    let tau = -det4(&alpha, &d1, &d2, &d3) / (v2 * v2 * v2 * kappa * kappa);
    Ok(FramedSample { t, s, alpha, tangent, normal, binormal, kappa_g: kappa, tau_g: tau })
}

/// Frame of `c` at parameter `s`.
///
/// `c` is expected to be parametrized by arc length; the formulas divide out
/// the speed, so other timelike parametrizations give the same frame.
pub fn frame_at<T: Real>(c: &ParamCurve<T>, s: T) -> Result<FramedSample<T>> {
    frame_from_jet(&c.jet(s), s, s)
}

/// `κg = ‖T' − α‖`, reported as 0 below the geodesic tolerance.
pub fn geodesic_curvature<T: Real>(c: &ParamCurve<T>, s: T) -> T {
    match frame_at(c, s) {
        Ok(f) => f.kappa_g,
        Err(_) => T::zero(),
    }
}

/// Geodesic torsion `τg = ⟨N', B⟩`.
///
/// Equals `−det(α, α', α'', α''')/κg²` in arc length; the sign makes the
/// Frenet system `N' = κg·T + τg·B` hold with `B = α × T × N`.
pub fn geodesic_torsion<T: Real>(c: &ParamCurve<T>, s: T) -> Result<T> {
    Ok(frame_at(c, s)?.tau_g)
}

/// Frames at `count` points uniformly spaced in arc length over the whole
/// domain of `c`.
pub fn frames_along<T: Real>(c: &ParamCurve<T>, count: usize) -> Result<Vec<FramedSample<T>>> {
    let map = ArcLengthMap::new(c, ARC_PANELS)?;
    frames_on(&map, T::zero(), map.total_length(), count)
}

/// Frames at `count` points uniformly spaced in arc length on `[s_lo, s_hi]`.
pub fn frames_on<T: Real>(map: &ArcLengthMap<T>, s_lo: T, s_hi: T, count: usize) -> Result<Vec<FramedSample<T>>> {
    if count < 2 {
        return Err(GeometryError::InsufficientSamples { found: count, required: 2 });
    }
    let h = (s_hi - s_lo) / T::from_usize(count - 1).unwrap();
    (0..count)
        .map(|i| {
            let s = s_lo + h * T::from_usize(i).unwrap();
            let t = map.param_at(s);
            frame_from_jet(&map.curve().jet(t), t, s)
        })
        .collect()
}

/// Prescribed geodesic curvature and torsion as functions of arc length.
#[derive(Clone)]
pub struct CurvatureProfile<T> {
    pub kappa_g: ScalarFn<T>,
    pub tau_g: ScalarFn<T>,
}

impl<T> fmt::Debug for CurvatureProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CurvatureProfile")
    }
}

impl<T: Real> CurvatureProfile<T> {
    pub fn new(
        kappa_g: impl Fn(T) -> T + Send + Sync + 'static,
        tau_g: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        CurvatureProfile { kappa_g: Arc::new(kappa_g), tau_g: Arc::new(tau_g) }
    }

    pub fn constant(kappa_g: T, tau_g: T) -> Self {
        Self::new(move |_| kappa_g, move |_| tau_g)
    }

    pub fn kappa(&self, s: T) -> T {
        (self.kappa_g)(s)
    }

    pub fn tau(&self, s: T) -> T {
        (self.tau_g)(s)
    }
}

fn frenet_rhs<T: Real>(profile: &CurvatureProfile<T>, s: T, y: &State<T, 4>) -> State<T, 4> {
    let [a, t, n, b] = *y;
    let k = profile.kappa(s);
    let tau = profile.tau(s);
    [t, a + n * k, t * k + b * tau, -(n * tau)]
}

/// Integrates the Frenet system
/// `α' = T, T' = α + κg·N, N' = κg·T + τg·B, B' = −τg·N`
/// with fixed-step RK4 and a Lorentzian Gram–Schmidt projection after every
/// step. Samples are returned on the grid `init.s + k·step` covering
/// `s_range`, in increasing `s`.
pub fn synthesize_from_curvatures<T: Real>(
    profile: &CurvatureProfile<T>,
    init: &FramedSample<T>,
    s_range: (T, T),
    step: T,
) -> Result<Vec<FramedSample<T>>> {
    if !(step > T::zero()) {
        return Err(GeometryError::InvalidParameter("step must be positive".into()));
    }
    let (lo, hi) = s_range;
    if !(lo <= init.s && init.s <= hi) {
        return Err(GeometryError::InvalidParameter("initial s outside the range".into()));
    }
    let err = init.gram_error().max(init.orientation_error());
    if !(err <= T::tol(TOL_FRAME)) {
        return Err(GeometryError::DegenerateFrame { index: 0, norm_sq: err.as_f64() });
    }
    let (grid, start) = grid_through(lo, hi, init.s, step);
    let rhs = |s: T, y: &State<T, 4>| frenet_rhs(profile, s, y);
    let mut frames = vec![init.frame(); grid.len()];
    for dir in [1isize, -1] {
        let mut y = init.frame();
        let mut i = start as isize;
        loop {
            let j = i + dir;
            if j < 0 || j as usize >= grid.len() {
                break;
            }
            let (si, sj) = (grid[i as usize], grid[j as usize]);
            let next = rk4_step(&rhs, si, &y, sj - si);
            let drift = gram_error(&next, &FRAME_SIGNATURES);
            if !(drift <= T::lit(MAX_STEP_DRIFT)) {
                return Err(GeometryError::FrameDrift { s: sj.as_f64(), drift: drift.as_f64() });
            }
            y = reorthonormalize(next, FRAME_SIGNATURES)?;
            frames[j as usize] = y;
            i = j;
        }
    }
    grid.iter()
        .zip(frames)
        .map(|(&s, frame)| {
            let kappa = profile.kappa(s);
            if !(kappa > T::tol(TOL_GEODESIC)) {
                return Err(GeometryError::GeodesicPoint { s: s.as_f64(), kappa: kappa.as_f64() });
            }
            Ok(FramedSample::canonical(s, kappa, profile.tau(s)).with_frame(frame))
        })
        .collect()
}

fn lsq_half_window<T: Real>(h: T) -> usize {
    (T::lit(LSQ_HALF_WIDTH) / h).round().to_usize().unwrap_or(usize::MAX).max(LSQ_DEGREE / 2 + 1)
}

fn uniform_step<T: Real>(s: &[T]) -> Result<T> {
    if s.len() < 5 {
        return Err(GeometryError::InsufficientSamples { found: s.len(), required: 5 });
    }
    let h = (s[s.len() - 1] - s[0]) / T::from_usize(s.len() - 1).unwrap();
    let uneven = s.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > T::lit(1e-6) * h.abs());
    if uneven || !(h > T::zero()) {
        return Err(GeometryError::InvalidParameter("samples must be uniformly spaced".into()));
    }
    Ok(h)
}

/// Re-derives `(κg, τg)` from frame samples uniformly spaced in arc length.
///
/// `T'` and `N'` come from windowed least-squares polynomial fits;
/// `κg = ⟨T' − α, N⟩` and `τg = ⟨N', B⟩`. Frames far from the initial one
/// have large entries, and their rounding error would swamp plain stencils.
pub fn reextract_frames<T: Real>(samples: &[FramedSample<T>]) -> Result<Vec<FramedSample<T>>> {
    let s: Vec<T> = samples.iter().map(|f| f.s).collect();
    let h = uniform_step(&s)?;
    let tangents: Vec<Vec4<T>> = samples.iter().map(|f| f.tangent).collect();
    let normals: Vec<Vec4<T>> = samples.iter().map(|f| f.normal).collect();
    let half = lsq_half_window(h);
    let dt = grid_lsq_derivative(&tangents, h, half, LSQ_DEGREE);
    let dn = grid_lsq_derivative(&normals, h, half, LSQ_DEGREE);
    samples
        .iter()
        .zip(dt.iter().zip(&dn))
        .map(|(f, (t1, n1))| {
            let kappa = (*t1 - f.alpha).dot(&f.normal);
            if !(kappa > T::tol(TOL_GEODESIC)) {
                return Err(GeometryError::GeodesicPoint { s: f.s.as_f64(), kappa: kappa.as_f64() });
            }
            Ok(FramedSample { kappa_g: kappa, tau_g: n1.dot(&f.binormal), ..*f })
        })
        .collect()
}

/// Frames of a curve known only through points on a uniform parameter grid.
///
/// The first three derivatives come from windowed least-squares polynomial
/// fits of the points; arc length is accumulated with the Hermite rule
/// `h/2·(v₀+v₁) + h²/12·(v₀'−v₁')`.
pub fn frames_from_points<T: Real>(t: &[T], points: &[Vec4<T>]) -> Result<Vec<FramedSample<T>>> {
    if t.len() != points.len() {
        return Err(GeometryError::InvalidParameter("parameter and point counts differ".into()));
    }
    let h = uniform_step(t)?;
    let half = lsq_half_window(h);
    let d = |order| grid_lsq_derivative_of_order(points, h, half, LSQ_DEGREE, order);
    let (d1, d2, d3) = (d(1), d(2), d(3));
    let jets: Vec<CurveJet<T>> =
        (0..t.len()).map(|i| CurveJet { value: points[i], d1: d1[i], d2: d2[i], d3: d3[i] }).collect();
    frames_from_jets(t, &jets)
}

/// Frames from jets on a uniform parameter grid, with Hermite arc length.
pub fn frames_from_jets<T: Real>(t: &[T], jets: &[CurveJet<T>]) -> Result<Vec<FramedSample<T>>> {
    let s = hermite_arc_length(t, jets)?;
    t.iter().zip(jets).zip(s).map(|((&ti, j), si)| frame_from_jet(j, ti, si)).collect()
}

/// Cumulative arc length along jets on a uniform parameter grid.
pub fn hermite_arc_length<T: Real>(t: &[T], jets: &[CurveJet<T>]) -> Result<Vec<T>> {
    let mut speed = Vec::with_capacity(jets.len());
    for (&ti, j) in t.iter().zip(jets) {
        let q = j.d1.norm_sq();
        if !(q < -T::tol(TOL_TIMELIKE)) {
            return Err(GeometryError::NotTimelike { t: ti.as_f64(), speed_sq: q.as_f64() });
        }
        let (v, v1, _) = j.speed_derivatives();
        speed.push((v, v1));
    }
    let mut s = vec![T::zero(); t.len()];
    for i in 1..t.len() {
        let h = t[i] - t[i - 1];
        let (a, da) = speed[i - 1];
        let (b, db) = speed[i];
        s[i] = s[i - 1] + h / T::lit(2.0) * (a + b) + h * h / T::lit(12.0) * (da - db);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const R2: f64 = std::f64::consts::SQRT_2;

    fn hyperbola() -> ParamCurve<f64> {
        ParamCurve::new(|s: f64| Vec4::new(s.sinh(), 0.0, s.cosh(), 0.0), (-1.0, 1.0))
    }

    pub(crate) fn pseudo_circle() -> ParamCurve<f64> {
        ParamCurve::new(|s: f64| Vec4::new((R2 * s).sinh() / R2, 1.0 / R2, (R2 * s).cosh() / R2, 0.0), (-1.0, 1.0))
    }

    #[test]
    fn unit_speed_hyperbola_is_its_own_arc_length() {
        let c = hyperbola();
        let map = ArcLengthMap::new(&c, ARC_PANELS).unwrap();
        assert_abs_diff_eq!(map.total_length(), 2.0, epsilon = 1e-10);
        for &t in &[-0.9, -0.2, 0.4, 0.95] {
            assert_abs_diff_eq!(map.arc_length_at(t), t + 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(map.param_at(t + 1.0), t, epsilon = 1e-10);
        }
    }

    #[test]
    fn doubled_speed_is_recovered() {
        let c = ParamCurve::new(|t: f64| Vec4::new((2.0 * t).sinh(), 0.0, (2.0 * t).cosh(), 0.0), (-0.5, 0.5));
        let r = arclength_reparametrize(&c).unwrap();
        for &s in &[0.0, 0.3, 0.77, 1.0] {
            assert_abs_diff_eq!(r.speed_sq(s), -1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn spacelike_circle_is_rejected() {
        let c = ParamCurve::new(|t: f64| Vec4::new(0.0, t.cos(), t.sin(), 0.0), (0.0, 1.0));
        assert!(matches!(arclength_reparametrize(&c), Err(GeometryError::NotTimelike { .. })));
    }

    #[test]
    fn pseudo_circle_frame() {
        let f = frame_at(&pseudo_circle(), 0.0).unwrap();
        assert_abs_diff_eq!(f.kappa_g, 1.0, epsilon = 1e-8);
        assert!((f.tangent - Vec4::basis(0)).max_abs() < 1e-9);
        assert!(f.gram_error() < 1e-8);
        assert!(f.orientation_error() < 1e-12);
        assert_abs_diff_eq!(f.tau_g, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn hyperbola_is_geodesic() {
        assert!(matches!(frame_at(&hyperbola(), 0.2), Err(GeometryError::GeodesicPoint { .. })));
        assert_eq!(geodesic_curvature(&hyperbola(), 0.2), 0.0);
    }

    #[test]
    fn jet_from_general_parametrization_matches_arc_length() {
        let c = pseudo_circle();
        let slow = ParamCurve::new(
            |t: f64| Vec4::new((R2 * t * t).sinh() / R2, 1.0 / R2, (R2 * t * t).cosh() / R2, 0.0),
            (0.5, 1.0),
        );
        let a = frame_at(&slow, 0.8).unwrap();
        let b = frame_at(&c, 0.64).unwrap();
        assert_abs_diff_eq!(a.kappa_g, b.kappa_g, epsilon = 1e-7);
        assert!((a.normal - b.normal).max_abs() < 1e-7);
    }

    #[test]
    fn synthesis_of_pseudo_circle() {
        let profile = CurvatureProfile::constant(1.0, 0.0);
        let init = FramedSample::canonical(0.0, 1.0, 0.0);
        let out = synthesize_from_curvatures(&profile, &init, (-1.0, 1.0), 1e-3).unwrap();
        assert_eq!(out.len(), 2001);
        for f in out.iter().step_by(100) {
            let s = f.s;
            let e2 = Vec4::basis(1);
            let e3 = Vec4::basis(2);
            let want = (e2 - e3) * 0.5 + (e2 + e3) * (0.5 * (R2 * s).cosh()) + Vec4::basis(0) * ((R2 * s).sinh() / R2);
            assert!((f.alpha - want).max_abs() < 1e-9, "s = {s}");
            assert!(f.gram_error() < 1e-12);
        }
        let back = reextract_frames(&out).unwrap();
        for f in &back {
            assert_abs_diff_eq!(f.kappa_g, 1.0, epsilon = 1e-6);
            assert_abs_diff_eq!(f.tau_g, 0.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn synthesis_rejects_huge_step() {
        let profile = CurvatureProfile::constant(50.0, 0.0);
        let init = FramedSample::canonical(0.0, 50.0, 0.0);
        assert!(matches!(
            synthesize_from_curvatures(&profile, &init, (0.0, 1.0), 0.5),
            Err(GeometryError::FrameDrift { .. })
        ));
    }

    #[test]
    fn frames_from_points_on_pseudo_circle() {
        let c = pseudo_circle();
        let t: Vec<f64> = (0..401).map(|i| -1.0 + i as f64 * 5e-3).collect();
        let pts: Vec<_> = t.iter().map(|&x| c.eval(x)).collect();
        let frames = frames_from_points(&t, &pts).unwrap();
        for f in &frames {
            assert_abs_diff_eq!(f.kappa_g, 1.0, epsilon = 1e-6);
            assert_abs_diff_eq!(f.s, f.t + 1.0, epsilon = 1e-9);
        }
    }
}
