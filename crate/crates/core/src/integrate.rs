//! Fixed-step classical Runge–Kutta for systems of `Vec4` unknowns.

use crate::minkowski::Vec4;
use crate::scalar::Real;

pub type State<T, const K: usize> = [Vec4<T>; K];

fn axpy<T: Real, const K: usize>(y: &State<T, K>, a: T, k: &State<T, K>) -> State<T, K> {
    std::array::from_fn(|i| y[i] + k[i] * a)
}

/// One classical fourth-order step of `y' = f(s, y)`.
pub fn rk4_step<T: Real, const K: usize>(
    f: &impl Fn(T, &State<T, K>) -> State<T, K>,
    s: T,
    y: &State<T, K>,
    h: T,
) -> State<T, K> {
    let half = h / T::lit(2.0);
    let k1 = f(s, y);
    let k2 = f(s + half, &axpy(y, half, &k1));
    let k3 = f(s + half, &axpy(y, half, &k2));
    let k4 = f(s + h, &axpy(y, h, &k3));
    let sixth = h / T::lit(6.0);
    std::array::from_fn(|i| y[i] + (k1[i] + k2[i] * T::lit(2.0) + k3[i] * T::lit(2.0) + k4[i]) * sixth)
}

/// Uniform grid `start + k·step` covering `[lo, hi]` and containing `start`.
///
/// Returns the grid and the index of `start` in it.
pub fn grid_through<T: Real>(lo: T, hi: T, start: T, step: T) -> (Vec<T>, usize) {
    let eps = T::lit(1e-9);
    let back = ((start - lo) / step + eps).floor().to_usize().unwrap_or(0);
    let fwd = ((hi - start) / step + eps).floor().to_usize().unwrap_or(0);
    let grid =
        (0..=back + fwd).map(|k| start + step * (T::from_usize(k).unwrap() - T::from_usize(back).unwrap())).collect();
    (grid, back)
}
