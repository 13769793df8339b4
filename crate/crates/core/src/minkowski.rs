//! Lorentzian linear algebra of Minkowski 4-space R⁴₁.
//!
//! The metric is `⟨x,y⟩ = −x1·y1 + x2·y2 + x3·y3 + x4·y4`; `x1` is the only
//! timelike coordinate. De Sitter 3-space S³₁ is the unit pseudo-sphere
//! `⟨x,x⟩ = 1`.

use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{GeometryError, Result};
use crate::scalar::Real;

/// Null-classification threshold for `|⟨x,x⟩|`.
pub const CAUSAL_TOL: f64 = 1e-9;
/// Accepted `|⟨v,v⟩ − 1|` for points of S³₁.
pub const SPHERE_TOL: f64 = 1e-9;
/// Beyond [`SPHERE_TOL`] but below this, points are projected back onto S³₁.
pub const SPHERE_PROJECT_TOL: f64 = 1e-6;
/// Tangency threshold `|⟨q,u⟩|`, relative to the Euclidean size of `u`.
pub const TANGENT_TOL: f64 = 1e-9;
/// Smallest `|⟨v,v⟩|` accepted for a Gram–Schmidt step.
pub const FRAME_TOL: f64 = 1e-12;

/// Signatures of the curve-hypersurface frame `{α, T, N, B}`.
pub const FRAME_SIGNATURES: [i8; 4] = [1, -1, 1, 1];

/// A vector of R⁴₁.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec4<T>(pub [T; 4]);

impl<T: Real> Vec4<T> {
    #[inline]
    pub fn new(x1: T, x2: T, x3: T, x4: T) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    #[inline]
    pub fn zero() -> Self {
        Vec4([T::zero(); 4])
    }

    /// Canonical basis vector `e_{axis+1}` (`axis` is 0-based).
    pub fn basis(axis: usize) -> Self {
        let mut v = Self::zero();
        v.0[axis] = T::one();
        v
    }

    pub fn from_f64(x: [f64; 4]) -> Self {
        Vec4(x.map(T::lit))
    }

    pub fn to_f64(self) -> [f64; 4] {
        self.0.map(Real::as_f64)
    }

    #[inline]
    pub fn x1(&self) -> T {
        self.0[0]
    }
    #[inline]
    pub fn x2(&self) -> T {
        self.0[1]
    }
    #[inline]
    pub fn x3(&self) -> T {
        self.0[2]
    }
    #[inline]
    pub fn x4(&self) -> T {
        self.0[3]
    }

    /// Lorentzian scalar product.
    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        lorentz_dot(self, other)
    }

    #[inline]
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    /// `‖x‖ = √|⟨x,x⟩|`.
    #[inline]
    pub fn norm(&self) -> T {
        self.norm_sq().abs().sqrt()
    }

    /// Plain Euclidean length, used for size-relative tolerances.
    pub fn euclidean_norm(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &c| acc.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn map(self, f: impl FnMut(T) -> T) -> Self {
        Vec4(self.0.map(f))
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(self) -> Vec4<U> {
        Vec4(self.0.map(|c| U::lit(c.as_f64())))
    }
}

impl<T: Real> Add for Vec4<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<T: Real> Sub for Vec4<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<T: Real> Neg for Vec4<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.map(|c| -c)
    }
}

impl<T: Real> Mul<T> for Vec4<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: T) -> Self {
        self.map(|c| c * rhs)
    }
}

impl<T: Real> Div<T> for Vec4<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: T) -> Self {
        self.map(|c| c / rhs)
    }
}

impl<T: Real> AddAssign for Vec4<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> SubAssign for Vec4<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T> Index<usize> for Vec4<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vec4<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

/// Causal character of a vector of R⁴₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl CausalCharacter {
    /// `+1`, `−1` or `0`.
    pub fn sign(self) -> i8 {
        match self {
            CausalCharacter::Spacelike => 1,
            CausalCharacter::Timelike => -1,
            CausalCharacter::Null => 0,
        }
    }
}

/// `−x1·y1 + x2·y2 + x3·y3 + x4·y4`.
#[inline]
///
/// Products and sums are error-compensated, so the result is as accurate as
/// if computed in twice the working precision. Boosted vectors have large
/// entries whose products cancel, and a plain sum loses most of its digits.
pub fn lorentz_dot<T: Real>(x: &Vec4<T>, y: &Vec4<T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for i in 0..4 {
        let a = if i == 0 { -x.0[0] } else { x.0[i] };
        let p = a * y.0[i];
        let p_err = a.mul_add(y.0[i], -p);
        let t = sum + p;
        let z = t - sum;
        comp = comp + ((sum - (t - z)) + (p - z)) + p_err;
        sum = t;
    }
    sum + comp
}

/// Classifies `x` by the sign of `⟨x,x⟩`, calling it null when `|⟨x,x⟩| ≤ tol`.
pub fn causal_character<T: Real>(x: &Vec4<T>, tol: T) -> CausalCharacter {
    let q = x.norm_sq();
    if q.abs() <= tol {
        CausalCharacter::Null
    } else if q < T::zero() {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Spacelike
    }
}

#[inline]
fn det3<T: Real>(a: [T; 3], b: [T; 3], c: [T; 3]) -> T {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// 3×3 minor of the rows `x, y, z` with column `skip` removed.
#[inline]
fn minor<T: Real>(x: &Vec4<T>, y: &Vec4<T>, z: &Vec4<T>, skip: usize) -> T {
    let pick = |v: &Vec4<T>| {
        let mut out = [T::zero(); 3];
        let mut k = 0;
        for (i, &c) in v.0.iter().enumerate() {
            if i != skip {
                out[k] = c;
                k += 1;
            }
        }
        out
    };
    det3(pick(x), pick(y), pick(z))
}

/// Determinant of the 4×4 matrix with rows `a, b, c, d`, by cofactor
/// expansion along the first row.
pub fn det4<T: Real>(a: &Vec4<T>, b: &Vec4<T>, c: &Vec4<T>, d: &Vec4<T>) -> T {
    a.0[0] * minor(b, c, d, 0) - a.0[1] * minor(b, c, d, 1) + a.0[2] * minor(b, c, d, 2) - a.0[3] * minor(b, c, d, 3)
}

/// Triple wedge product `x × y × z`: the formal determinant with first row
/// `(−e1, e2, e3, e4)`. Satisfies `⟨w, x × y × z⟩ = det(w, x, y, z)`.
pub fn wedge3<T: Real>(x: &Vec4<T>, y: &Vec4<T>, z: &Vec4<T>) -> Vec4<T> {
    Vec4::new(-minor(x, y, z, 0), -minor(x, y, z, 1), minor(x, y, z, 2), -minor(x, y, z, 3))
}

/// A point of De Sitter 3-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointOnS13<T>(Vec4<T>);

impl<T: Real> PointOnS13<T> {
    /// Accepts `v` when `|⟨v,v⟩ − 1| ≤ 1e−9`; projects it back with `v/‖v‖`
    /// when the deviation is below `1e−6`; rejects it otherwise.
    pub fn new(v: Vec4<T>) -> Result<Self> {
        if !v.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let q = v.norm_sq();
        let dev = (q - T::one()).abs();
        if dev <= T::tol(SPHERE_TOL) {
            Ok(PointOnS13(v))
        } else if dev <= T::tol(SPHERE_PROJECT_TOL) {
            Ok(PointOnS13(v / q.sqrt()))
        } else {
            Err(GeometryError::NotOnSphere { deviation: (q - T::one()).as_f64() })
        }
    }

    /// Wraps `v` without checking membership.
    pub fn new_unchecked(v: Vec4<T>) -> Self {
        PointOnS13(v)
    }

    pub fn from_f64(x: [f64; 4]) -> Result<Self> {
        Self::new(Vec4::from_f64(x))
    }

    #[inline]
    pub fn vec(&self) -> Vec4<T> {
        self.0
    }

    /// Checks that `u` lies in `T_q S³₁`.
    pub fn check_tangent(&self, u: &Vec4<T>) -> Result<()> {
        let inner = self.0.dot(u);
        let scale = T::one().max(u.euclidean_norm());
        if inner.abs() > T::tol(TANGENT_TOL) * scale {
            Err(GeometryError::NotTangent { inner: inner.as_f64() })
        } else {
            Ok(())
        }
    }
}

impl<T> std::ops::Deref for PointOnS13<T> {
    type Target = Vec4<T>;
    fn deref(&self) -> &Vec4<T> {
        &self.0
    }
}

/// Cross product of `T_q S³₁`: `u ∧ v = q × u × v`.
///
/// The result is tangent at `q`, pseudo-orthogonal to `u` and `v`, and
/// `⟨w, u ∧ v⟩ = −det(q, u, v, w)` for tangent `w`.
pub fn tangent_cross<T: Real>(q: &PointOnS13<T>, u: &Vec4<T>, v: &Vec4<T>) -> Result<Vec4<T>> {
    q.check_tangent(u)?;
    q.check_tangent(v)?;
    Ok(wedge3(&q.vec(), u, v))
}

/// Lorentzian Gram–Schmidt.
///
/// Returns vectors with `⟨vᵢ,vⱼ⟩ = δᵢⱼ·signatures[i]`. The direction of the
/// first vector is kept; each later vector keeps its component off the span
/// of the earlier ones.
pub fn reorthonormalize_frame<T: Real>(vectors: [Vec4<T>; 4], signatures: [i8; 4]) -> Result<[Vec4<T>; 4]> {
    reorthonormalize(vectors, signatures)
}

pub(crate) fn reorthonormalize<T: Real, const K: usize>(
    vectors: [Vec4<T>; K],
    signatures: [i8; K],
) -> Result<[Vec4<T>; K]> {
    let mut out = vectors;
    for i in 0..K {
        let mut v = vectors[i];
        for j in 0..i {
            let sig = T::from_i8(signatures[j]).unwrap();
            v -= out[j] * (v.dot(&out[j]) * sig);
        }
        let q = v.norm_sq();
        let want = T::from_i8(signatures[i]).unwrap();
        if !q.is_finite() || q.abs() <= T::tol(FRAME_TOL) || q.signum() != want.signum() {
            return Err(GeometryError::DegenerateFrame { index: i, norm_sq: q.as_f64() });
        }
        out[i] = v / q.abs().sqrt();
    }
    Ok(out)
}

/// Largest entry of `|Gram(vectors) − diag(signatures)|`.
pub fn gram_error<T: Real, const K: usize>(vectors: &[Vec4<T>; K], signatures: &[i8; K]) -> T {
    let mut err = T::zero();
    for i in 0..K {
        for j in i..K {
            let target = if i == j { T::from_i8(signatures[i]).unwrap() } else { T::zero() };
            err = err.max((vectors[i].dot(&vectors[j]) - target).abs());
        }
    }
    err
}

/// [`gram_error`] with entry `(i, j)` divided by `‖vᵢ‖_E·‖vⱼ‖_E`.
///
/// Boosted frames have large Euclidean entries, which puts a floor of about
/// `ε·‖vᵢ‖_E·‖vⱼ‖_E` under the absolute Gram error in floating point.
pub fn relative_gram_error<T: Real, const K: usize>(vectors: &[Vec4<T>; K], signatures: &[i8; K]) -> T {
    let mut err = T::zero();
    for i in 0..K {
        for j in i..K {
            let target = if i == j { T::from_i8(signatures[i]).unwrap() } else { T::zero() };
            let scale = vectors[i].euclidean_norm() * vectors[j].euclidean_norm();
            err = err.max((vectors[i].dot(&vectors[j]) - target).abs() / scale.max(T::one()));
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type V = Vec4<f64>;

    #[test]
    fn dot_examples() {
        let e1 = V::basis(0);
        let e2 = V::basis(1);
        assert_eq!(lorentz_dot(&e1, &e1), -1.0);
        assert_eq!(lorentz_dot(&e2, &e2), 1.0);
        let x = V::new(0.0, 1f64.cosh(), 1f64.sinh(), 0.0);
        assert_abs_diff_eq!(lorentz_dot(&e2, &x), 1.5430806348152437, epsilon = 1e-15);
    }

    #[test]
    fn causal_examples() {
        let tol = 1e-9;
        assert_eq!(causal_character(&V::new(2.0, 1.0, 0.0, 0.0), tol), CausalCharacter::Timelike);
        assert_eq!(causal_character(&V::new(1.0, 1.0, 0.0, 0.0), tol), CausalCharacter::Null);
        assert_eq!(causal_character(&V::new(0.0, 3.0, 4.0, 0.0), tol), CausalCharacter::Spacelike);
    }

    #[test]
    fn wedge_of_spatial_basis_is_minus_e1() {
        let w = wedge3(&V::basis(1), &V::basis(2), &V::basis(3));
        assert_eq!(w, V::new(-1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn wedge_with_repeated_argument_vanishes() {
        let x = V::new(0.3, -1.2, 0.7, 2.0);
        let z = V::new(1.0, 0.5, -0.25, 0.125);
        assert!(wedge3(&x, &x, &z).max_abs() < 1e-15);
        let y = V::new(-0.6, 0.1, 1.1, 0.9);
        assert_abs_diff_eq!(x.dot(&wedge3(&x, &y, &z)), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn det4_of_identity_and_swap() {
        let e: Vec<V> = (0..4).map(V::basis).collect();
        assert_eq!(det4(&e[0], &e[1], &e[2], &e[3]), 1.0);
        assert_eq!(det4(&e[1], &e[0], &e[2], &e[3]), -1.0);
    }

    #[test]
    fn tangent_cross_example() {
        let q = PointOnS13::new(V::basis(1)).unwrap();
        let c = tangent_cross(&q, &V::basis(0), &V::basis(2)).unwrap();
        assert_eq!(c, V::basis(3));
        let u = V::new(0.2, 0.0, 1.0, -0.5);
        assert_eq!(tangent_cross(&q, &u, &u).unwrap(), V::zero());
    }

    #[test]
    fn tangent_cross_rejects_non_tangent() {
        let q = PointOnS13::new(V::basis(1)).unwrap();
        let err = tangent_cross(&q, &V::basis(1), &V::basis(2)).unwrap_err();
        assert!(matches!(err, GeometryError::NotTangent { .. }));
    }

    #[test]
    fn sphere_membership_rules() {
        assert!(PointOnS13::new(V::basis(1)).is_ok());
        let slightly_off = V::new(0.0, 1.0 + 1e-7, 0.0, 0.0);
        let p = PointOnS13::new(slightly_off).unwrap();
        assert_abs_diff_eq!(p.norm_sq(), 1.0, epsilon = 1e-15);
        assert!(matches!(PointOnS13::new(V::new(0.0, 1.1, 0.0, 0.0)), Err(GeometryError::NotOnSphere { .. })));
        assert!(matches!(PointOnS13::new(V::basis(0)), Err(GeometryError::NotOnSphere { .. })));
        assert_eq!(PointOnS13::new(V::new(f64::NAN, 1.0, 0.0, 0.0)), Err(GeometryError::NonFinite));
    }

    fn canonical_frame() -> [V; 4] {
        [V::basis(1), V::basis(0), V::basis(2), V::basis(3)]
    }

    #[test]
    fn reorthonormalize_is_idempotent_on_frames() {
        let f = canonical_frame();
        let g = reorthonormalize_frame(f, FRAME_SIGNATURES).unwrap();
        for i in 0..4 {
            assert!((f[i] - g[i]).max_abs() <= 1e-14);
        }
    }

    #[test]
    fn reorthonormalize_hand_example() {
        let input = [V::basis(1), V::basis(0) + V::basis(1) * 0.1, V::basis(2), V::basis(3)];
        let out = reorthonormalize_frame(input, FRAME_SIGNATURES).unwrap();
        assert_eq!(out[0], V::basis(1));
        assert!((out[1] - V::basis(0)).max_abs() < 1e-15);
        assert_eq!(out[2], V::basis(2));
        assert_eq!(out[3], V::basis(3));
    }

    #[test]
    fn reorthonormalize_repairs_perturbation() {
        let mut f = canonical_frame();
        let mut k = 0.0;
        for v in f.iter_mut() {
            for c in v.0.iter_mut() {
                k += 1.0;
                *c += 1e-6 * (k * 0.37f64).sin();
            }
        }
        let out = reorthonormalize_frame(f, FRAME_SIGNATURES).unwrap();
        assert!(gram_error(&out, &FRAME_SIGNATURES) < 1e-12);
    }

    #[test]
    fn reorthonormalize_detects_degeneracy() {
        let f = [V::basis(1), V::basis(1), V::basis(2), V::basis(3)];
        assert!(matches!(
            reorthonormalize_frame(f, FRAME_SIGNATURES),
            Err(GeometryError::DegenerateFrame { index: 1, .. })
        ));
    }
}
