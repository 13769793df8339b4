//! Timelike curves in the pseudo-sphere S²₁ ⊂ T_pS³₁: Sabban frames,
//! geodesic curvature `κγ` and directrix synthesis.

use crate::curve::MAX_STEP_DRIFT;
use crate::curve::{CurveJet, ParamCurve, TOL_FRAME, TOL_TIMELIKE};
use crate::diff::grid_first_derivative;
use crate::error::{GeometryError, Result};
use crate::integrate::{grid_through, rk4_step, State};
use crate::minkowski::{det4, gram_error, reorthonormalize, wedge3, PointOnS13, Vec4};
use crate::scalar::Real;

/// Membership tolerance for S²₁ of a chart.
pub const TOL_PSEUDO_SPHERE: f64 = 1e-9;

const CHART_SIGNATURES: [i8; 4] = [1, 1, -1, 1];

/// Pseudo-orthonormal basis `(f1, f2, f3)` of `T_pS³₁`, `f1` timelike.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentSphereChart<T> {
    pub p: PointOnS13<T>,
    pub basis: [Vec4<T>; 3],
}

impl<T: Real> TangentSphereChart<T> {
    /// Projects `e1, …, e4` onto `T_pS³₁` and runs Lorentzian Gram–Schmidt;
    /// `f1` comes from `e1`, the spacelike pair from the first two of
    /// `e2, e3, e4` that stay independent.
    pub fn new(p: PointOnS13<T>) -> Result<Self> {
        let pv = p.vec();
        let project = |v: Vec4<T>| v - pv * v.dot(&pv);
        let mut basis = vec![];
        let f1 = project(Vec4::basis(0));
        basis.push(f1 / f1.norm());
        for axis in 1..4 {
            if basis.len() == 3 {
                break;
            }
            let mut v = project(Vec4::basis(axis));
            for (j, f) in basis.iter().enumerate() {
                let sig = if j == 0 { -T::one() } else { T::one() };
                v -= *f * (v.dot(f) * sig);
            }
            let q = v.norm_sq();
            if q > T::lit(1e-6) {
                basis.push(v / q.sqrt());
            }
        }
        if basis.len() < 3 {
            return Err(GeometryError::DegenerateFrame { index: basis.len(), norm_sq: 0.0 });
        }
        Ok(TangentSphereChart { p, basis: [basis[0], basis[1], basis[2]] })
    }

    /// `y0·f1 + y1·f2 + y2·f3`.
    pub fn to_ambient(&self, y: [T; 3]) -> Vec4<T> {
        self.basis[0] * y[0] + self.basis[1] * y[1] + self.basis[2] * y[2]
    }

    /// Coordinates of a vector of `T_pS³₁` in the chart basis.
    pub fn coordinates(&self, x: &Vec4<T>) -> [T; 3] {
        [-x.dot(&self.basis[0]), x.dot(&self.basis[1]), x.dot(&self.basis[2])]
    }

    /// Largest deviation of `⟨γ,p⟩` and `⟨γ,γ⟩ − 1` from zero.
    pub fn membership_error(&self, x: &Vec4<T>) -> T {
        x.dot(&self.p.vec()).abs().max((x.norm_sq() - T::one()).abs())
    }

    /// Sabban frame at `γ = f2` moving along `f1`.
    pub fn initial_sample(&self, t: T, kappa_gamma: T) -> SabbanSample<T> {
        let gamma = self.basis[1];
        let tangent = self.basis[0];
        SabbanSample { t, gamma, tangent, normal: wedge3(&self.p.vec(), &gamma, &tangent), kappa_gamma }
    }
}

/// Point of a unit-speed timelike curve of S²₁ with its Sabban frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SabbanSample<T> {
    pub t: T,
    pub gamma: Vec4<T>,
    pub tangent: Vec4<T>,
    /// `γ ∧ γ' = p × γ × γ'`.
    pub normal: Vec4<T>,
    pub kappa_gamma: T,
}

impl<T: Real> SabbanSample<T> {
    /// Jet of `γ` in arc length from the Sabban equations, given `κγ'`.
    pub fn jet(&self, dkappa: T) -> CurveJet<T> {
        let k = self.kappa_gamma;
        CurveJet {
            value: self.gamma,
            d1: self.tangent,
            d2: self.gamma + self.normal * k,
            d3: self.tangent * (T::one() + k * k) + self.normal * dkappa,
        }
    }
}

/// Sabban frame of `γ` at `t` with `κγ = det(γ, γ', γ'', p)`.
///
/// Any timelike parametrization is accepted; the speed is divided out.
pub fn sabban_frame<T: Real>(chart: &TangentSphereChart<T>, gamma: &ParamCurve<T>, t: T) -> Result<SabbanSample<T>> {
    let j = gamma.jet(t);
    let dev = chart.membership_error(&j.value);
    if !(dev <= T::tol(TOL_PSEUDO_SPHERE)) {
        return Err(GeometryError::NotOnPseudoSphere { t: t.as_f64(), deviation: dev.as_f64() });
    }
    let q = j.d1.norm_sq();
    if !(q < -T::tol(TOL_TIMELIKE)) {
        return Err(GeometryError::NotTimelike { t: t.as_f64(), speed_sq: q.as_f64() });
    }
    let v = (-q).sqrt();
    let p = chart.p.vec();
    let tangent = j.d1 / v;
    Ok(SabbanSample {
        t,
        gamma: j.value,
        tangent,
        normal: wedge3(&p, &j.value, &tangent),
        kappa_gamma: det4(&j.value, &j.d1, &j.d2, &p) / (v * v * v),
    })
}

/// Integrates `γ' = T, T' = γ + κγ·N, N' = κγ·T` from `init` over the grid
/// `init.t + k·step` covering `t_range`, projecting `{p, γ, T, N}` back to
/// a pseudo-orthonormal set after each step.
pub fn synthesize_directrix<T: Real>(
    chart: &TangentSphereChart<T>,
    kappa_gamma: impl Fn(T) -> T,
    init: &SabbanSample<T>,
    t_range: (T, T),
    step: T,
) -> Result<Vec<SabbanSample<T>>> {
    if !(step > T::zero()) {
        return Err(GeometryError::InvalidParameter("step must be positive".into()));
    }
    let (lo, hi) = t_range;
    if !(lo <= init.t && init.t <= hi) {
        return Err(GeometryError::InvalidParameter("initial t outside the range".into()));
    }
    let p = chart.p.vec();
    let start_state = [p, init.gamma, init.tangent, init.normal];
    let err = gram_error(&start_state, &CHART_SIGNATURES)
        .max((wedge3(&p, &init.gamma, &init.tangent) - init.normal).max_abs());
    if !(err <= T::tol(TOL_FRAME)) {
        return Err(GeometryError::DegenerateFrame { index: 1, norm_sq: err.as_f64() });
    }
    let (grid, start) = grid_through(lo, hi, init.t, step);
    let rhs = |t: T, y: &State<T, 4>| {
        let k = kappa_gamma(t);
        [Vec4::zero(), y[2], y[1] + y[3] * k, y[2] * k]
    };
    let mut states = vec![start_state; grid.len()];
    for dir in [1isize, -1] {
        let mut y = start_state;
        let mut i = start as isize;
        loop {
            let j = i + dir;
            if j < 0 || j as usize >= grid.len() {
                break;
            }
            let (ti, tj) = (grid[i as usize], grid[j as usize]);
            let next = rk4_step(&rhs, ti, &y, tj - ti);
            let drift = gram_error(&next, &CHART_SIGNATURES);
            if !(drift <= T::lit(MAX_STEP_DRIFT)) {
                return Err(GeometryError::FrameDrift { s: tj.as_f64(), drift: drift.as_f64() });
            }
            y = reorthonormalize(next, CHART_SIGNATURES)?;
            states[j as usize] = y;
            i = j;
        }
    }
    Ok(grid
        .iter()
        .zip(states)
        .map(|(&t, y)| SabbanSample { t, gamma: y[1], tangent: y[2], normal: y[3], kappa_gamma: kappa_gamma(t) })
        .collect())
}

/// Recomputes `κγ = det(γ, T, T', p)` along samples on a uniform grid, with
/// `T'` from five-point stencils.
pub fn reextract_directrix_curvature<T: Real>(
    chart: &TangentSphereChart<T>,
    samples: &[SabbanSample<T>],
) -> Result<Vec<T>> {
    if samples.len() < 5 {
        return Err(GeometryError::InsufficientSamples { found: samples.len(), required: 5 });
    }
    let h = samples[1].t - samples[0].t;
    let tangents: Vec<Vec4<T>> = samples.iter().map(|s| s.tangent).collect();
    let dt = grid_first_derivative(&tangents, h);
    let p = chart.p.vec();
    Ok(samples.iter().zip(dt).map(|(s, d)| det4(&s.gamma, &s.tangent, &d, &p)).collect())
}

/// The spiral directrix curvature `b·(cosh²(t+t0) + a²)^(−3/2)` and its
/// derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpiralCurvature<T> {
    pub a: T,
    pub b: T,
    pub t0: T,
}

impl<T: Real> SpiralCurvature<T> {
    pub fn new(a: T, b: T, t0: T) -> Result<Self> {
        if a == T::zero() || b == T::zero() || !(a.is_finite() && b.is_finite() && t0.is_finite()) {
            return Err(GeometryError::InvalidParameter("spiral needs finite nonzero a and b".into()));
        }
        Ok(SpiralCurvature { a, b, t0 })
    }

    pub fn kappa(&self, t: T) -> T {
        let c = (t + self.t0).cosh();
        self.b * (c * c + self.a * self.a).powf(T::lit(-1.5))
    }

    pub fn dkappa(&self, t: T) -> T {
        let x = t + self.t0;
        let c = x.cosh();
        -T::lit(3.0) * self.b * c * x.sinh() * (c * c + self.a * self.a).powf(T::lit(-2.5))
    }
}

/// `t ↦ b·(cosh²(t+t0) + a²)^(−3/2)`.
pub fn spiral_curvature<T: Real>(a: T, b: T, t0: T) -> Result<impl Fn(T) -> T + Clone> {
    let sp = SpiralCurvature::new(a, b, t0)?;
    Ok(move |t| sp.kappa(t))
}
