//! Closed-form curves used by the worked examples and the test suites.

use crate::curve::{CurvatureProfile, CurveJet, ParamCurve};
use crate::minkowski::Vec4;
use crate::scalar::Real;

/// Unit-speed pseudo-circle `(r sinh(s/r), √(1−r²), r cosh(s/r), 0)`,
/// `0 < r ≤ 1`, with `κg = √(1−r²)/r` and `τg = 0`.
pub fn pseudo_circle<T: Real>(r: T, domain: (T, T)) -> ParamCurve<T> {
    let h = (T::one() - r * r).sqrt();
    ParamCurve::from_jet(
        move |s| {
            let (sh, ch) = ((s / r).sinh(), (s / r).cosh());
            CurveJet {
                value: Vec4::new(r * sh, h, r * ch, T::zero()),
                d1: Vec4::new(ch, T::zero(), sh, T::zero()),
                d2: Vec4::new(sh / r, T::zero(), ch / r, T::zero()),
                d3: Vec4::new(ch / (r * r), T::zero(), sh / (r * r), T::zero()),
            }
        },
        domain,
    )
}

/// Unit-speed curve `(r sinh(t/r), 0, r cosh(t/r), q)` of the pseudo-sphere
/// S²₁ ⊂ T_{e2}S³₁, `r² + q² = 1`; its `κγ` is `q/r`.
pub fn small_circle_directrix<T: Real>(r: T, q: T, domain: (T, T)) -> ParamCurve<T> {
    ParamCurve::from_jet(
        move |t| {
            let (sh, ch) = ((t / r).sinh(), (t / r).cosh());
            CurveJet {
                value: Vec4::new(r * sh, T::zero(), r * ch, q),
                d1: Vec4::new(ch, T::zero(), sh, T::zero()),
                d2: Vec4::new(sh / r, T::zero(), ch / r, T::zero()),
                d3: Vec4::new(ch / (r * r), T::zero(), sh / (r * r), T::zero()),
            }
        },
        domain,
    )
}

/// `κg = 10`, `τg = 2 sinh s + 2 cosh s`.
pub fn hyperbolic_torsion_profile<T: Real>() -> CurvatureProfile<T> {
    CurvatureProfile::new(|_| T::lit(10.0), |s: T| T::lit(2.0) * (s.sinh() + s.cosh()))
}

fn cusp_jet<T: Real>(t: T) -> CurveJet<T> {
    let c = |k: f64| T::lit(k);
    let (s17, c17) = (c(17.0) * t).sin_cos();
    let (s9, c9) = (c(9.0) * t).sin_cos();
    let (s25, c25) = (c(25.0) * t).sin_cos();
    let a = c(25.0 / 16.0);
    let b = c(9.0 / 16.0);
    let r = c(15.0 / 8.0);
    let z = T::zero();
    CurveJet {
        value: Vec4::new(r * c17, z, a * c9 + b * c25, a * s9 - b * s25),
        d1: Vec4::new(-r * c(17.0) * s17, z, -a * c(9.0) * s9 - b * c(25.0) * s25, a * c(9.0) * c9 - b * c(25.0) * c25),
        d2: Vec4::new(
            -r * c(289.0) * c17,
            z,
            -a * c(81.0) * c9 - b * c(625.0) * c25,
            -a * c(81.0) * s9 + b * c(625.0) * s25,
        ),
        d3: Vec4::new(
            r * c(4913.0) * s17,
            z,
            a * c(729.0) * s9 + b * c(15625.0) * s25,
            -a * c(729.0) * c9 + b * c(15625.0) * c25,
        ),
    }
}

/// Directrix with cusps
/// `γ(t) = (15/8 cos 17t, 0, 25/16 cos 9t + 9/16 cos 25t, 25/16 sin 9t − 9/16 sin 25t)`
/// in S²₁ ⊂ T_{e2}S³₁, in its original parameter.
///
/// `⟨γ',γ'⟩ = −225 sin²(17t)`: the curve is timelike but not unit speed,
/// with cusps at `t = kπ/17`.
pub fn cusp_directrix_raw<T: Real>(domain: (T, T)) -> ParamCurve<T> {
    ParamCurve::from_jet(cusp_jet, domain)
}

/// Arc length of [`cusp_directrix_raw`] from `t = 0` on its first arch.
pub const CUSP_ARCH_LENGTH: f64 = 30.0 / 17.0;

/// [`cusp_directrix_raw`] on its first arch `0 < t < π/17`, reparametrized
/// by the arc length `σ = (15/17)(1 − cos 17t)`. Defined for
/// `0 < σ < 30/17`; the ends are cusps.
pub fn cusp_directrix<T: Real>() -> ParamCurve<T> {
    ParamCurve::from_jet(
        |sigma: T| {
            let c = |k: f64| T::lit(k);
            let w = T::one() - c(17.0 / 15.0) * sigma;
            let t = w.acos() / c(17.0);
            let q = T::one() - w * w;
            let g = q.powf(c(-0.5)) / c(15.0);
            let gw = w * q.powf(c(-1.5)) / c(15.0);
            let gww = (T::one() + c(2.0) * w * w) * q.powf(c(-2.5)) / c(15.0);
            let k = c(17.0 / 15.0);
            cusp_jet(t).compose(g, -k * gw, k * k * gww)
        },
        (T::zero(), T::lit(CUSP_ARCH_LENGTH)),
    )
}

/// `sech(t)/(16√(1+sech²t)) · (30 cos 17t, 16/sech t, 25 cos 9t + 9 cos 25t, 25 sin 9t − 9 sin 25t)`,
/// the exponential construction over [`cusp_directrix_raw`] with apex `e2`
/// and `η(t) = arctan(sech t)` in the raw parameter.
pub fn cusp_rectifying_raw<T: Real>(domain: (T, T)) -> ParamCurve<T> {
    ParamCurve::new(
        |t: T| {
            let c = |k: f64| T::lit(k);
            let sech = T::one() / t.cosh();
            let scale = sech / (c(16.0) * (T::one() + sech * sech).sqrt());
            Vec4::new(
                c(30.0) * (c(17.0) * t).cos(),
                c(16.0) / sech,
                c(25.0) * (c(9.0) * t).cos() + c(9.0) * (c(25.0) * t).cos(),
                c(25.0) * (c(9.0) * t).sin() - c(9.0) * (c(25.0) * t).sin(),
            ) * scale
        },
        domain,
    )
}

/// Spacelike directrix `(sinh(t/15), cosh(t/15) cos t, cosh(t/15) sin t, 0)`
/// in the unit sphere of T_{e4}S³₁.
pub fn secant_directrix<T: Real>(domain: (T, T)) -> ParamCurve<T> {
    ParamCurve::new(
        |t: T| {
            let x = t / T::lit(15.0);
            Vec4::new(x.sinh(), x.cosh() * t.cos(), x.cosh() * t.sin(), T::zero())
        },
        domain,
    )
}

/// `(sec t sinh(t/15), cosh(t/15), cosh(t/15) tan t, 1)/√(1 + sec²t)`,
/// the exponential construction over [`secant_directrix`] with apex `e4` and
/// `η(t) = arctan(sec t)`.
pub fn secant_curve<T: Real>(domain: (T, T)) -> ParamCurve<T> {
    ParamCurve::new(
        |t: T| {
            let x = t / T::lit(15.0);
            let sec = T::one() / t.cos();
            Vec4::new(sec * x.sinh(), x.cosh(), x.cosh() * t.tan(), T::one()) / (T::one() + sec * sec).sqrt()
        },
        domain,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cusp_directrix_speed_and_membership() {
        let raw = cusp_directrix_raw::<f64>((-1.0, 1.0));
        for &t in &[0.0, 0.03, 0.1, 0.5] {
            let j = raw.jet(t);
            assert_abs_diff_eq!(j.value.norm_sq(), 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(j.d1.norm_sq(), -225.0 * (17.0 * t).sin().powi(2), epsilon = 1e-10);
            assert!((raw.derivative(t, 0) - j.value).max_abs() == 0.0);
        }
        assert_eq!(raw.eval(0.0), Vec4::new(15.0 / 8.0, 0.0, 17.0 / 8.0, 0.0));
    }

    #[test]
    fn cusp_directrix_jet_matches_differences() {
        let raw = cusp_directrix_raw::<f64>((-1.0, 1.0));
        let plain = ParamCurve::new(move |t| raw.eval(t), (-1.0, 1.0));
        let a = cusp_directrix_raw::<f64>((-1.0, 1.0)).jet(0.07);
        let b = plain.jet(0.07);
        assert!((a.d1 - b.d1).max_abs() < 1e-6);
        assert!((a.d2 - b.d2).max_abs() < 1e-3);
        assert!((a.d3 - b.d3).max_abs() < 1.0);
    }

    #[test]
    fn arc_length_reparametrization_is_unit_speed() {
        let g = cusp_directrix::<f64>();
        for &s in &[0.1, 0.4, 0.8, 1.2] {
            let j = g.jet(s);
            assert_abs_diff_eq!(j.d1.norm_sq(), -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(j.d1.dot(&j.d2), 0.0, epsilon = 1e-10);
            let fd = (g.eval(s + 1e-5) - g.eval(s - 1e-5)) / 2e-5;
            assert!((fd - j.d1).max_abs() < 1e-7);
            let fd2 = (g.derivative(s + 1e-5, 2) - g.derivative(s - 1e-5, 2)) / 2e-5;
            assert!((fd2 - j.d3).max_abs() < 1e-5);
        }
    }

    #[test]
    fn explicit_curves_lie_on_de_sitter_space() {
        let a = cusp_rectifying_raw::<f64>((-4.0, 4.0));
        let b = secant_curve::<f64>((-1.5, 1.5));
        for i in 0..=40 {
            let t = -1.4 + i as f64 * 0.07;
            assert_abs_diff_eq!(a.eval(t).norm_sq(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b.eval(t).norm_sq(), 1.0, epsilon = 1e-12);
        }
        let g = secant_directrix::<f64>((-1.0, 1.0));
        assert_abs_diff_eq!(g.eval(0.4).norm_sq(), 1.0, epsilon = 1e-14);
        let ch = (0.4f64 / 15.0).cosh();
        assert_abs_diff_eq!(g.speed_sq(0.4), ch * ch - 1.0 / 225.0, epsilon = 1e-9);
    }
}
