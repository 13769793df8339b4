//! Stereographic projection of S³₁ into Minkowski 3-space.

use desitter_core::Vec4f;

use crate::error::{CliError, Result};

/// Smallest `|1 + sign·x_pole|` accepted by [`ProjectionSpec::project`].
pub const POLE_TOL: f64 = 1e-9;

/// Projection from the pole `−sign·e_axis` onto the hyperplane `x_axis = 0`.
///
/// `axis` is 1-based and must name a spacelike coordinate (2, 3 or 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ProjectionSpec {
    pub pole_axis: usize,
    pub pole_sign: i8,
}

impl ProjectionSpec {
    pub fn new(pole_axis: usize, pole_sign: i8) -> Result<Self> {
        if !(2..=4).contains(&pole_axis) {
            return Err(CliError::PoleAxis(pole_axis));
        }
        if pole_sign != 1 && pole_sign != -1 {
            return Err(CliError::PoleSign(pole_sign));
        }
        Ok(ProjectionSpec { pole_axis, pole_sign })
    }

    /// The pole `−sign·e_axis`.
    pub fn pole(&self) -> Vec4f {
        -Vec4f::basis(self.pole_axis - 1) * f64::from(self.pole_sign)
    }

    fn rest(&self) -> [usize; 3] {
        let mut out = [0; 3];
        let mut k = 0;
        for i in 0..4 {
            if i != self.pole_axis - 1 {
                out[k] = i;
                k += 1;
            }
        }
        out
    }

    /// The three non-pole coordinates divided by `1 + sign·x_pole`.
    pub fn project(&self, x: &Vec4f) -> Result<[f64; 3]> {
        let d = 1.0 + f64::from(self.pole_sign) * x[self.pole_axis - 1];
        if !(d.abs() > POLE_TOL) {
            return Err(CliError::AtPole { point: x.0 });
        }
        Ok(self.rest().map(|i| x[i] / d))
    }

    /// Inverse of [`project`](Self::project) onto S³₁.
    ///
    /// With `Q` the Minkowski square of `y` (timelike first entry), the point
    /// is `(2y, sign·(1 − Q))/(1 + Q)`. Undefined for `Q = −1`.
    pub fn inverse(&self, y: [f64; 3]) -> Result<Vec4f> {
        let q = -y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        let d = 1.0 + q;
        if !(d.abs() > POLE_TOL) {
            return Err(CliError::Usage(format!("{y:?} lies on the image of the light cone at infinity")));
        }
        let mut x = Vec4f::zero();
        for (k, i) in self.rest().into_iter().enumerate() {
            x[i] = 2.0 * y[k] / d;
        }
        x[self.pole_axis - 1] = f64::from(self.pole_sign) * (1.0 - q) / d;
        Ok(x)
    }
}

impl Default for ProjectionSpec {
    fn default() -> Self {
        ProjectionSpec { pole_axis: 2, pole_sign: 1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn antipode_of_pole_maps_to_origin() {
        for axis in 2..=4 {
            for sign in [1, -1] {
                let spec = ProjectionSpec::new(axis, sign).unwrap();
                assert_eq!(spec.project(&-spec.pole()).unwrap(), [0.0; 3]);
                assert!(matches!(spec.project(&spec.pole()), Err(CliError::AtPole { .. })));
            }
        }
    }

    #[test]
    fn pole_choice_for_curves_near_e2() {
        let e2 = Vec4f::basis(1);
        let bad = ProjectionSpec::new(2, -1).unwrap();
        assert!(matches!(bad.project(&e2), Err(CliError::AtPole { .. })));
        let good = ProjectionSpec::default();
        assert_eq!(good.pole(), Vec4f::new(0.0, -1.0, 0.0, 0.0));
        assert_eq!(good.project(&e2).unwrap(), [0.0; 3]);
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(ProjectionSpec::new(1, 1), Err(CliError::PoleAxis(1))));
        assert!(matches!(ProjectionSpec::new(3, 0), Err(CliError::PoleSign(0))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn inverse_then_project_is_identity(axis in 2usize..=4, sign in prop::sample::select(vec![1i8, -1]),
                                            y in prop::array::uniform3(-0.9f64..0.9)) {
            let spec = ProjectionSpec::new(axis, sign).unwrap();
            let q = -y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
            prop_assume!((1.0 + q).abs() > 1e-2);
            let x = spec.inverse(y).unwrap();
            prop_assert!((x.norm_sq() - 1.0).abs() < 1e-10);
            let back = spec.project(&x).unwrap();
            for k in 0..3 {
                prop_assert!((back[k] - y[k]).abs() < 1e-12 * (1.0 + y[k].abs()));
            }
        }
    }
}
