//! Timelike rectifying curves: the sinh/cosh ratio test, apex conditions,
//! the exponential construction over a directrix, apex recovery, the
//! extremal inequality and the constant-curvature spiral pipeline.

use std::sync::Arc;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

use crate::cone::exp_jet;
use crate::curve::{frame_from_jet, frames_from_jets, CurveJet, FramedSample, ParamCurve, TOL_GEODESIC};
use crate::diff::derivative;
use crate::error::{GeometryError, Result};
use crate::fit::SinhCoshFit;
use crate::minkowski::{det4, PointOnS13, Vec4};
use crate::pseudosphere::{synthesize_directrix, SpiralCurvature, TangentSphereChart, TOL_PSEUDO_SPHERE};
use crate::scalar::Real;

/// Minimum number of usable samples for a ratio fit or apex recovery.
pub const MIN_SAMPLES: usize = 8;
/// RMS below which a ratio fit counts as rectifying.
pub const RECTIFYING_RMS: f64 = 1e-4;
/// Default residual tolerance of [`apex_conditions`].
pub const APEX_TOL: f64 = 1e-4;
/// Width of the undecided band around `m₂² − m₁² = 1`.
pub const BOUNDARY_BAND: f64 = 1e-9;
/// `max |τg|` at or below this makes a curve planar for apex recovery.
pub const PLANAR_TAU: f64 = 1e-6;
/// Largest RMS of `⟨p, N⟩` accepted by [`recover_apex`].
pub const APEX_RESIDUAL_MAX: f64 = 1e-3;
/// Relative eigenvalue size counted as null in [`recover_apex`].
pub const NULL_EIGEN_REL: f64 = 1e-9;
/// Closest Euclidean approach of the apex to the curve.
pub const APEX_CLEARANCE: f64 = 1e-6;
/// Grid points used when scanning a construction for regularity.
pub const REGULARITY_SCAN: usize = 2048;
/// Allowed `|⟨γ',γ'⟩ + 1|` for a unit-speed directrix.
pub const UNIT_SPEED_TOL: f64 = 1e-6;

/// Outcome of a check that can land on an undecidable boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Fit of `τg/κg` to `μ₁ sinh(s+s₀) + μ₂ cosh(s+s₀)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioFit<T> {
    pub mu1: T,
    pub mu2: T,
    pub s0: T,
    /// `A` in the shift-free form `A sinh s + B cosh s`.
    pub sinh_coeff: T,
    /// `B` in the shift-free form.
    pub cosh_coeff: T,
    pub residual_rms: T,
    /// `μ₂² − μ₁² < 1`.
    pub admissible: bool,
    /// Admissible with `residual_rms` below [`RECTIFYING_RMS`].
    pub rectifying: bool,
    pub samples: usize,
}

/// Least-squares fit of `τg/κg` against `{sinh s, cosh s}`.
///
/// Samples with `κg` at or below the geodesic tolerance are skipped.
pub fn fit_ratio_form<T: Real>(samples: &[FramedSample<T>]) -> Result<RatioFit<T>> {
    if samples.len() < MIN_SAMPLES {
        return Err(GeometryError::InsufficientSamples { found: samples.len(), required: MIN_SAMPLES });
    }
    let usable: Vec<&FramedSample<T>> = samples.iter().filter(|f| f.kappa_g > T::tol(TOL_GEODESIC)).collect();
    if usable.is_empty() {
        return Err(GeometryError::GeodesicCurve);
    }
    if usable.len() < MIN_SAMPLES {
        return Err(GeometryError::InsufficientSamples { found: usable.len(), required: MIN_SAMPLES });
    }
    let s: Vec<T> = usable.iter().map(|f| f.s).collect();
    let y: Vec<T> = usable.iter().map(|f| f.tau_g / f.kappa_g).collect();
    let fit = SinhCoshFit::fit(&s, &y)?;
    let (mu1, mu2, s0) = fit.shifted();
    let admissible = fit.invariant() < T::one();
    Ok(RatioFit {
        mu1,
        mu2,
        s0,
        sinh_coeff: fit.a,
        cosh_coeff: fit.b,
        residual_rms: fit.rms,
        admissible,
        rectifying: admissible && fit.rms < T::lit(RECTIFYING_RMS),
        samples: usable.len(),
    })
}

/// The six equivalent apex conditions evaluated along a sampled curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApexReport<T> {
    pub p: PointOnS13<T>,
    /// `max |⟨p, N⟩|`.
    pub max_pn: T,
    /// Mean of `⟨p, B⟩`.
    pub sigma: T,
    /// `max |⟨p, B⟩ − σ|`.
    pub sigma_dev: T,
    /// `⟨p, α⟩ ≈ m₁ sinh s + m₂ cosh s` (shift-free basis).
    pub m_fit: SinhCoshFit<T>,
    /// `⟨p, T⟩ ≈ n₁ sinh s + n₂ cosh s` (shift-free basis).
    pub n_fit: SinhCoshFit<T>,
    /// Mean of `|p⊥| = √(⟨p,N⟩² + ⟨p,B⟩²)`.
    pub n: T,
    /// `max ||p⊥|² − n²|`.
    pub n_dev: T,
    /// `|n₁² − n₂² + n² − 1|`.
    pub unit_identity_residual: T,
    /// `cos η ≈ k₁ sinh s + k₂ cosh s` with `η = d(p, α)`.
    pub k_fit: SinhCoshFit<T>,
    /// `m₂² − m₁²`, required to be at most 1.
    pub m_invariant: T,
    /// Status of `m₂² − m₁² ≤ 1`; undecided within [`BOUNDARY_BAND`] of 1.
    pub boundary: Verdict,
    pub tol: T,
    pub verdict: Verdict,
}

impl<T: Real> ApexReport<T> {
    /// Largest of the residuals that must vanish.
    pub fn max_residual(&self) -> T {
        [
            self.max_pn,
            self.sigma_dev,
            self.n_dev,
            self.unit_identity_residual,
            self.m_fit.rms,
            self.n_fit.rms,
            self.k_fit.rms,
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

/// [`apex_conditions_with_tol`] at the default tolerance `1e−4`.
pub fn apex_conditions<T: Real>(samples: &[FramedSample<T>], p: &PointOnS13<T>) -> Result<ApexReport<T>> {
    apex_conditions_with_tol(samples, p, T::lit(APEX_TOL))
}

/// Evaluates every apex condition for `p` along samples in arc length.
pub fn apex_conditions_with_tol<T: Real>(
    samples: &[FramedSample<T>],
    p: &PointOnS13<T>,
    tol: T,
) -> Result<ApexReport<T>> {
    if samples.len() < MIN_SAMPLES {
        return Err(GeometryError::InsufficientSamples { found: samples.len(), required: MIN_SAMPLES });
    }
    let pv = p.vec();
    let clearance = samples.iter().map(|f| (f.alpha - pv).euclidean_norm()).fold(T::infinity(), T::min);
    if clearance < T::lit(APEX_CLEARANCE) {
        return Err(GeometryError::ApexOnCurve { distance: clearance.as_f64() });
    }
    let count = T::from_usize(samples.len()).unwrap();
    let s: Vec<T> = samples.iter().map(|f| f.s).collect();
    let pa: Vec<T> = samples.iter().map(|f| pv.dot(&f.alpha)).collect();
    let pt: Vec<T> = samples.iter().map(|f| pv.dot(&f.tangent)).collect();
    let pn: Vec<T> = samples.iter().map(|f| pv.dot(&f.normal)).collect();
    let pb: Vec<T> = samples.iter().map(|f| pv.dot(&f.binormal)).collect();
    let cos_eta: Vec<T> = pa.iter().map(|&d| d.max(-T::one()).min(T::one()).acos().cos()).collect();

    let max_pn = pn.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let sigma = pb.iter().fold(T::zero(), |a, &x| a + x) / count;
    let sigma_dev = pb.iter().fold(T::zero(), |m, &x| m.max((x - sigma).abs()));
    let perp_sq: Vec<T> = pn.iter().zip(&pb).map(|(&a, &b)| a * a + b * b).collect();
    let n_sq = perp_sq.iter().fold(T::zero(), |a, &x| a + x) / count;
    let n_dev = perp_sq.iter().fold(T::zero(), |m, &x| m.max((x - n_sq).abs()));

    let m_fit = SinhCoshFit::fit(&s, &pa)?;
    let n_fit = SinhCoshFit::fit(&s, &pt)?;
    let k_fit = SinhCoshFit::fit(&s, &cos_eta)?;
    let unit_identity_residual = (-n_fit.invariant() + n_sq - T::one()).abs();
    let m_invariant = m_fit.invariant();
    let band = T::lit(BOUNDARY_BAND);
    let boundary = if (m_invariant - T::one()).abs() <= band {
        Verdict::Undecided
    } else if m_invariant < T::one() {
        Verdict::Holds
    } else {
        Verdict::Fails
    };

    let mut report = ApexReport {
        p: *p,
        max_pn,
        sigma,
        sigma_dev,
        m_fit,
        n_fit,
        n: n_sq.sqrt(),
        n_dev,
        unit_identity_residual,
        k_fit,
        m_invariant,
        boundary,
        tol,
        verdict: Verdict::Fails,
    };
    report.verdict = if report.max_residual() >= tol || boundary == Verdict::Fails { Verdict::Fails } else { boundary };
    Ok(report)
}

/// A distance function `η(t)` with derivatives up to third order.
pub trait EtaFunction<T: Real>: Send + Sync {
    /// `[η, η', η'', η''']` at `t`.
    fn jet(&self, t: T) -> [T; 4];
}

/// `η(t) = arctan(a·sech(t + t0))`, `a ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaProfile<T> {
    pub a: T,
    pub t0: T,
}

impl<T: Real> EtaProfile<T> {
    pub fn new(a: T, t0: T) -> Result<Self> {
        if a == T::zero() || !a.is_finite() || !t0.is_finite() {
            return Err(GeometryError::InvalidParameter("η profile needs finite a ≠ 0".into()));
        }
        Ok(EtaProfile { a, t0 })
    }

    pub fn eval(&self, t: T) -> T {
        (self.a / (t + self.t0).cosh()).atan()
    }

    /// `sin(η)η'' − 2cos(η)(η')² + cos(η)sin²(η)`.
    pub fn ode_residual(&self, t: T) -> T {
        let [e, e1, e2, _] = self.jet(t);
        let (s, c) = e.sin_cos();
        s * e2 - T::lit(2.0) * c * e1 * e1 + c * s * s
    }

    /// `sin²(η) − (η')²`, the squared speed of the construction.
    pub fn regularity(&self, t: T) -> T {
        let [e, e1, _, _] = self.jet(t);
        let s = e.sin();
        s * s - e1 * e1
    }
}

impl<T: Real> EtaFunction<T> for EtaProfile<T> {
    fn jet(&self, t: T) -> [T; 4] {
        let x = t + self.t0;
        let sech = T::one() / x.cosh();
        let th = x.tanh();
        let a = self.a;
        let h = a * sech;
        let h1 = -a * sech * th;
        let h2 = a * sech * (th * th - sech * sech);
        let h3 = a * sech * th * (T::lit(5.0) * sech * sech - th * th);
        let q = T::one() + h * h;
        let (two, six, eight) = (T::lit(2.0), T::lit(6.0), T::lit(8.0));
        [
            h.atan(),
            h1 / q,
            h2 / q - two * h * h1 * h1 / (q * q),
            h3 / q - six * h * h1 * h2 / (q * q) - two * h1 * h1 * h1 / (q * q)
                + eight * h * h * h1 * h1 * h1 / (q * q * q),
        ]
    }
}

/// Any `η` given as a closure; derivatives come from central differences.
#[derive(Clone)]
pub struct EtaFn<F>(pub F);

impl<T: Real, F: Fn(T) -> T + Send + Sync> EtaFunction<T> for EtaFn<F> {
    fn jet(&self, t: T) -> [T; 4] {
        let f = &self.0;
        [f(t), derivative(f, t, 1), derivative(f, t, 2), derivative(f, t, 3)]
    }
}

fn check_directrix<T: Real>(p: &PointOnS13<T>, gamma: &ParamCurve<T>, t_range: (T, T)) -> Result<()> {
    let pv = p.vec();
    let n = 64;
    for i in 0..=n {
        let t = t_range.0 + (t_range.1 - t_range.0) * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
        let j = gamma.jet(t);
        let dev = j.value.dot(&pv).abs().max((j.value.norm_sq() - T::one()).abs());
        if !(dev <= T::tol(TOL_PSEUDO_SPHERE)) {
            return Err(GeometryError::NotOnPseudoSphere { t: t.as_f64(), deviation: dev.as_f64() });
        }
        let q = j.d1.norm_sq();
        if !((q + T::one()).abs() <= T::lit(UNIT_SPEED_TOL)) {
            return Err(GeometryError::NotUnitSpeed { t: t.as_f64(), speed_sq: q.as_f64() });
        }
    }
    Ok(())
}

/// `α(t) = cos(η(t))·p + sin(η(t))·γ(t)` over a unit-speed timelike
/// directrix `γ` in S²₁ ⊂ T_pS³₁.
///
/// The result carries an analytic jet. Fails with `RegularityFailure` at the
/// first scanned `t` where `sin²η − (η')² ≤ 0`.
pub fn construct_rectifying<T: Real, E: EtaFunction<T> + 'static>(
    p: &PointOnS13<T>,
    gamma: &ParamCurve<T>,
    eta: E,
    t_range: (T, T),
) -> Result<ParamCurve<T>> {
    if !(t_range.1 > t_range.0) {
        return Err(GeometryError::InvalidParameter("empty parameter range".into()));
    }
    check_directrix(p, gamma, t_range)?;
    let n = REGULARITY_SCAN;
    for i in 0..=n {
        let t = t_range.0 + (t_range.1 - t_range.0) * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
        let [e, e1, _, _] = eta.jet(t);
        let q = e.sin().powi(2) - e1 * e1;
        if !(q > T::zero()) {
            return Err(GeometryError::RegularityFailure { t: t.as_f64(), speed_sq: q.as_f64() });
        }
    }
    let pv = p.vec();
    let gamma = gamma.clone();
    let eta = Arc::new(eta);
    Ok(ParamCurve::from_jet(move |t| exp_jet(&pv, eta.jet(t), &gamma.jet(t)), t_range))
}

/// Recovers the apex of a rectifying curve from its principal normals.
///
/// Minimises `Σ⟨p, Nᵢ⟩²` through the smallest eigenvector of
/// `Σ (G Nᵢ)(G Nᵢ)ᵀ`, `G = diag(−1, 1, 1, 1)`, then scales it to
/// `⟨p,p⟩ = 1` and orients it so that `⟨p, α⟩ > 0` mid-curve. Returns the
/// apex and the RMS of `⟨p, Nᵢ⟩`.
pub fn recover_apex<T: Real>(samples: &[FramedSample<T>]) -> Result<(PointOnS13<T>, T)> {
    if samples.len() < MIN_SAMPLES {
        return Err(GeometryError::InsufficientSamples { found: samples.len(), required: MIN_SAMPLES });
    }
    let max_tau = samples.iter().fold(T::zero(), |m, f| m.max(f.tau_g.abs()));
    if !(max_tau > T::lit(PLANAR_TAU)) {
        return Err(GeometryError::PlanarDegenerate);
    }
    let mut m = Matrix4::<f64>::zeros();
    for f in samples {
        let n = f.normal.to_f64();
        let g = Vector4::new(-n[0], n[1], n[2], n[3]);
        let g = g / g.norm();
        m += g * g.transpose();
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let largest = eig.eigenvalues[order[3]].max(f64::MIN_POSITIVE);
    let null_dim = order.iter().filter(|&&i| eig.eigenvalues[i] <= NULL_EIGEN_REL * largest).count();
    if null_dim >= 2 {
        return Err(GeometryError::PlanarDegenerate);
    }
    let col = eig.eigenvectors.column(order[0]);
    let v = Vec4::<T>::from_f64([col[0], col[1], col[2], col[3]]);
    let q = v.norm_sq();
    if !(q > T::zero()) {
        return Err(GeometryError::NotRectifying { residual: f64::INFINITY });
    }
    let mut p = v / q.sqrt();
    if p.dot(&samples[samples.len() / 2].alpha) < T::zero() {
        p = -p;
    }
    let count = T::from_usize(samples.len()).unwrap();
    let residual = (samples.iter().map(|f| p.dot(&f.normal).powi(2)).fold(T::zero(), |a, x| a + x) / count).sqrt();
    if !(residual <= T::lit(APEX_RESIDUAL_MAX)) {
        return Err(GeometryError::NotRectifying { residual: residual.as_f64() });
    }
    Ok((PointOnS13::new(p)?, residual))
}

/// One sample of the extremal inequality `κγ² ≤ ‖α'‖⁴κg²/sin²η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalReport<T> {
    pub t: T,
    /// `κγ²`.
    pub lhs: T,
    /// `‖α'‖⁴κg²/sin²η` with `‖α'‖² = sin²η − (η')²`.
    pub rhs: T,
    /// `rhs − lhs`.
    pub gap: T,
    /// `lhs/rhs` clamped to `[0, 1]`.
    pub cos2_theta: T,
    /// Unsigned angle `arccos √cos2_theta` in `[0, π/2]`.
    pub theta: T,
}

/// Evaluates the extremal inequality for `α = exp_p(η γ)` at `count`
/// uniformly spaced parameters of `t_range`.
pub fn extremal_check<T: Real, E: EtaFunction<T>>(
    p: &PointOnS13<T>,
    gamma: &ParamCurve<T>,
    eta: &E,
    t_range: (T, T),
    count: usize,
) -> Result<Vec<ExtremalReport<T>>> {
    if count < 2 {
        return Err(GeometryError::InsufficientSamples { found: count, required: 2 });
    }
    let pv = p.vec();
    let h = (t_range.1 - t_range.0) / T::from_usize(count - 1).unwrap();
    (0..count)
        .map(|i| {
            let t = t_range.0 + h * T::from_usize(i).unwrap();
            let ej = eta.jet(t);
            let sin_eta = ej[0].sin();
            if sin_eta == T::zero() {
                return Err(GeometryError::InvalidParameter("η must be nonzero".into()));
            }
            let speed_sq = sin_eta * sin_eta - ej[1] * ej[1];
            if !(speed_sq > T::zero()) {
                return Err(GeometryError::RegularityFailure { t: t.as_f64(), speed_sq: speed_sq.as_f64() });
            }
            let gj = gamma.jet(t);
            let gv = (-gj.d1.norm_sq()).sqrt();
            let kappa_gamma = det4(&gj.value, &gj.d1, &gj.d2, &pv) / (gv * gv * gv);
            let aj = exp_jet(&pv, ej, &gj);
            let kappa_g = frame_from_jet(&aj, t, t).map(|f| f.kappa_g).or_else(|e| match e {
                GeometryError::GeodesicPoint { .. } => Ok(T::zero()),
                other => Err(other),
            })?;
            let lhs = kappa_gamma * kappa_gamma;
            let rhs = speed_sq * speed_sq * kappa_g * kappa_g / (sin_eta * sin_eta);
            let cos2 = if rhs > T::zero() { (lhs / rhs).min(T::one()).max(T::zero()) } else { T::one() };
            Ok(ExtremalReport { t, lhs, rhs, gap: rhs - lhs, cos2_theta: cos2, theta: cos2.sqrt().acos() })
        })
        .collect()
}

/// Result of the constant-curvature spiral pipeline.
#[derive(Clone, Debug)]
pub struct CorollaryReport<T> {
    /// `b = a(1 + a²)κ₀`.
    pub b: T,
    /// `max |κg − |κ₀||` over the samples.
    pub max_kappa_error: T,
    pub ratio_fit: RatioFit<T>,
    pub samples: Vec<FramedSample<T>>,
}

/// Synthesizes the directrix with `κγ = b(cosh²(t+t₀) + a²)^(−3/2)`,
/// `b = a(1+a²)κ₀`, builds `α = exp_p(η γ)` with `η = arctan(a sech(t+t₀))`
/// over it (apex `e2`), extracts `κg` and `τg` in arc length and fits
/// `τg/κg`.
pub fn corollary_roundtrip<T: Real>(a: T, t0: T, kappa0: T, t_range: (T, T), step: T) -> Result<CorollaryReport<T>> {
    if kappa0 == T::zero() || !kappa0.is_finite() {
        return Err(GeometryError::InvalidParameter("κ₀ must be finite and nonzero".into()));
    }
    let eta = EtaProfile::new(a, t0)?;
    let b = a * (T::one() + a * a) * kappa0;
    let spiral = SpiralCurvature::new(a, b, t0)?;
    let chart = TangentSphereChart::new(PointOnS13::new(Vec4::basis(1))?)?;
    let start = if t_range.0 <= T::zero() && T::zero() <= t_range.1 { T::zero() } else { t_range.0 };
    let init = chart.initial_sample(start, spiral.kappa(start));
    let directrix = synthesize_directrix(&chart, |t| spiral.kappa(t), &init, t_range, step)?;
    let pv = chart.p.vec();
    let t: Vec<T> = directrix.iter().map(|d| d.t).collect();
    let jets: Vec<CurveJet<T>> =
        directrix.iter().map(|d| exp_jet(&pv, eta.jet(d.t), &d.jet(spiral.dkappa(d.t)))).collect();
    let samples = frames_from_jets(&t, &jets)?;
    let target = kappa0.abs();
    let max_kappa_error = samples.iter().fold(T::zero(), |m, f| m.max((f.kappa_g - target).abs()));
    let ratio_fit = fit_ratio_form(&samples)?;
    Ok(CorollaryReport { b, max_kappa_error, ratio_fit, samples })
}
