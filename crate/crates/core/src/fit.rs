//! Least-squares fits of `y(s) ≈ A·sinh(s) + B·cosh(s)`.

use crate::error::{GeometryError, Result};
use crate::scalar::Real;

/// Below this, `|A|` and `|B|` count as equal when factoring the shift.
pub const SHIFT_TIE_TOL: f64 = 1e-12;

/// Result of a two-term hyperbolic fit in the shift-free basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinhCoshFit<T> {
    /// Coefficient of `sinh(s)`.
    pub a: T,
    /// Coefficient of `cosh(s)`.
    pub b: T,
    pub rms: T,
    pub samples: usize,
}

impl<T: Real> SinhCoshFit<T> {
    /// Solves the 2×2 normal equations for `(A, B)`.
    pub fn fit(s: &[T], y: &[T]) -> Result<Self> {
        let n = s.len().min(y.len());
        if n < 2 {
            return Err(GeometryError::InsufficientSamples { found: n, required: 2 });
        }
        let (mut ss, mut sc, mut cc, mut sy, mut cy) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
        for (&si, &yi) in s.iter().zip(y) {
            let (sh, ch) = (si.sinh(), si.cosh());
            ss = ss + sh * sh;
            sc = sc + sh * ch;
            cc = cc + ch * ch;
            sy = sy + sh * yi;
            cy = cy + ch * yi;
        }
        let det = ss * cc - sc * sc;
        if !(det.abs() > T::epsilon() * ss * cc) {
            return Err(GeometryError::InvalidParameter("sample abscissae are degenerate".into()));
        }
        let a = (sy * cc - cy * sc) / det;
        let b = (ss * cy - sc * sy) / det;
        let mut sq = T::zero();
        for (&si, &yi) in s.iter().zip(y) {
            let r = yi - a * si.sinh() - b * si.cosh();
            sq = sq + r * r;
        }
        Ok(SinhCoshFit { a, b, rms: (sq / T::from_usize(n).unwrap()).sqrt(), samples: n })
    }

    pub fn eval(&self, s: T) -> T {
        self.a * s.sinh() + self.b * s.cosh()
    }

    /// `B² − A²`, invariant under shifts of the arc-length origin.
    pub fn invariant(&self) -> T {
        self.b * self.b - self.a * self.a
    }

    /// Factors `A·sinh(s) + B·cosh(s) = μ₁ sinh(s+s₀) + μ₂ cosh(s+s₀)`.
    ///
    /// When `|B| > |A|` the shift `s₀ = atanh(A/B)` makes `μ₁ = 0`;
    /// otherwise `s₀ = 0` and `(μ₁, μ₂) = (A, B)`.
    pub fn shifted(&self) -> (T, T, T) {
        let (a, b) = (self.a, self.b);
        if (a.abs() - b.abs()).abs() <= T::tol(SHIFT_TIE_TOL) || b.abs() <= a.abs() {
            return (a, b, T::zero());
        }
        let edge = T::one() - T::lit(SHIFT_TIE_TOL);
        let s0 = (a / b).max(-edge).min(edge).atanh();
        let mu2 = b.signum() * (b * b - a * a).sqrt();
        (T::zero(), mu2, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Vec<f64> {
        (0..201).map(|i| -1.0 + i as f64 * 0.01).collect()
    }

    #[test]
    fn exact_data_is_recovered() {
        let s = grid();
        let y: Vec<f64> = s.iter().map(|x| 0.3 * x.sinh() - 1.2 * x.cosh()).collect();
        let f = SinhCoshFit::fit(&s, &y).unwrap();
        assert_abs_diff_eq!(f.a, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(f.b, -1.2, epsilon = 1e-12);
        assert!(f.rms < 1e-13);
    }

    #[test]
    fn shift_factorisation_preserves_function() {
        let f = SinhCoshFit { a: 0.3, b: -1.2, rms: 0.0, samples: 0 };
        let (m1, m2, s0) = f.shifted();
        assert_eq!(m1, 0.0);
        assert!(m2 < 0.0);
        for x in [-1.0f64, 0.0, 0.7] {
            assert_abs_diff_eq!(m2 * (x + s0).cosh(), f.eval(x), epsilon = 1e-12);
        }
        let tie = SinhCoshFit { a: 0.2, b: 0.2, rms: 0.0, samples: 0 };
        assert_eq!(tie.shifted(), (0.2, 0.2, 0.0));
    }

    #[test]
    fn identity_is_not_hyperbolic() {
        let s = grid();
        let f = SinhCoshFit::fit(&s, &s).unwrap();
        assert!(f.rms > 1e-2, "rms {}", f.rms);
    }
}
