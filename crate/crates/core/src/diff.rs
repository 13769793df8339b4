//! Finite differences: Richardson-extrapolated central stencils for
//! functions of one variable, and fixed stencils for uniform grids.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::minkowski::Vec4;
use crate::scalar::Real;

/// Values that can be combined linearly: scalars and `Vec4`.
pub trait Linear<T>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {}

impl<T: Real> Linear<T> for T {}
impl<T: Real> Linear<T> for Vec4<T> {}

/// Default step for first derivatives.
pub const STEP_FIRST: f64 = 1e-4;
/// Default step for second and third derivatives.
pub const STEP_HIGHER: f64 = 1e-3;

/// Default step for a derivative of `order`, widened in low precision so the
/// stencil does not drown in rounding error.
pub fn default_step<T: Real>(order: u8) -> T {
    let base = if order <= 1 { STEP_FIRST } else { STEP_HIGHER };
    let floor = T::epsilon().powf(T::one() / T::lit(f64::from(order) + 2.0));
    T::lit(base).max(floor)
}

fn central<T: Real, V: Linear<T>>(f: &impl Fn(T) -> V, t: T, order: u8, h: T) -> V {
    let two = T::lit(2.0);
    match order {
        1 => (f(t + h) - f(t - h)) * (T::one() / (two * h)),
        2 => (f(t + h) - f(t) * two + f(t - h)) * (T::one() / (h * h)),
        3 => (f(t + two * h) - f(t + h) * two + f(t - h) * two - f(t - two * h)) * (T::one() / (two * h * h * h)),
        _ => panic!("unsupported derivative order {order}"),
    }
}

/// Derivative of order 1, 2 or 3 by a central stencil at step `h`,
/// Richardson-extrapolated once: `(4·D(h/2) − D(h))/3`.
pub fn derivative_with_step<T: Real, V: Linear<T>>(f: impl Fn(T) -> V, t: T, order: u8, h: T) -> V {
    let coarse = central(&f, t, order, h);
    let fine = central(&f, t, order, h / T::lit(2.0));
    (fine * T::lit(4.0) - coarse) * (T::one() / T::lit(3.0))
}

/// [`derivative_with_step`] at the default step for `order`.
pub fn derivative<T: Real, V: Linear<T>>(f: impl Fn(T) -> V, t: T, order: u8) -> V {
    derivative_with_step(f, t, order, default_step::<T>(order))
}

/// First derivative of uniformly spaced samples, fourth order everywhere.
///
/// Uses the centred five-point stencil inside and one-sided five-point
/// stencils at the two ends. Needs at least five samples.
pub fn grid_first_derivative<T: Real, V: Linear<T>>(f: &[V], h: T) -> Vec<V> {
    let n = f.len();
    assert!(n >= 5, "five-point stencil needs at least five samples");
    let c = |k: f64| T::lit(k);
    let inv = T::one() / (c(12.0) * h);
    (0..n)
        .map(|i| {
            let d = if i >= 2 && i + 2 < n {
                f[i - 2] - f[i - 1] * c(8.0) + f[i + 1] * c(8.0) - f[i + 2]
            } else if i == 0 {
                f[1] * c(48.0) - f[0] * c(25.0) - f[2] * c(36.0) + f[3] * c(16.0) - f[4] * c(3.0)
            } else if i == 1 {
                f[2] * c(18.0) - f[0] * c(3.0) - f[1] * c(10.0) - f[3] * c(6.0) + f[4]
            } else if i == n - 1 {
                f[n - 1] * c(25.0) - f[n - 2] * c(48.0) + f[n - 3] * c(36.0) - f[n - 4] * c(16.0) + f[n - 5] * c(3.0)
            } else {
                f[n - 2] * c(10.0) + f[n - 1] * c(3.0) - f[n - 3] * c(18.0) + f[n - 4] * c(6.0) - f[n - 5]
            };
            d * inv
        })
        .collect()
}

/// Applies [`grid_first_derivative`] `order` times.
pub fn grid_derivative<T: Real, V: Linear<T>>(f: &[V], h: T, order: u8) -> Vec<V> {
    let mut out = f.to_vec();
    for _ in 0..order {
        out = grid_first_derivative(&out, h);
    }
    out
}

/// Weights that map samples at integer offsets `xs` (relative to the target)
/// to the `order`-th derivative at offset 0 of their least-squares
/// polynomial of `degree`.
fn lsq_weights(xs: &[f64], degree: usize, order: usize) -> Vec<f64> {
    let scale = xs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let v = DMatrix::from_fn(xs.len(), degree + 1, |i, j| (xs[i] / scale).powi(j as i32));
    let pinv = v.pseudo_inverse(1e-14).expect("Vandermonde pseudo-inverse");
    let factor = (1..=order).product::<usize>() as f64 / scale.powi(order as i32);
    pinv.row(order).iter().map(|w| w * factor).collect()
}

/// First derivative of uniformly spaced samples from local least-squares
/// polynomial fits (Savitzky–Golay).
///
/// Each point uses `2·half_window + 1` consecutive samples, shifted inward
/// near the ends. Averaging over the window suppresses sample noise that a
/// five-point stencil would amplify by `1/h`.
pub fn grid_lsq_derivative<T: Real, V: Linear<T>>(f: &[V], h: T, half_window: usize, degree: usize) -> Vec<V> {
    grid_lsq_derivative_of_order(f, h, half_window, degree, 1)
}

/// [`grid_lsq_derivative`] for derivatives of any order up to `degree`.
pub fn grid_lsq_derivative_of_order<T: Real, V: Linear<T>>(
    f: &[V],
    h: T,
    half_window: usize,
    degree: usize,
    order: usize,
) -> Vec<V> {
    let n = f.len();
    assert!(n > order, "least-squares derivative needs more samples than its order");
    let m = half_window.min((n - 1) / 2).max(order.div_ceil(2));
    let width = (2 * m + 1).min(n);
    let degree = degree.min(width - 1).max(order);
    let inv_h = (0..order).fold(T::one(), |acc, _| acc / h);
    let mut cache: Vec<Option<Vec<T>>> = vec![None; width];
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(m).min(n - width);
            let pos = i - lo;
            let w = cache[pos].get_or_insert_with(|| {
                let xs: Vec<f64> = (0..width).map(|k| k as f64 - pos as f64).collect();
                lsq_weights(&xs, degree, order).into_iter().map(T::lit).collect()
            });
            let mut acc = f[lo] * w[0];
            for k in 1..width {
                acc = acc + f[lo + k] * w[k];
            }
            acc * inv_h
        })
        .collect()
}
