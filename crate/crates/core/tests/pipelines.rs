use desitter_core::catalog::{cusp_directrix, hyperbolic_torsion_profile, small_circle_directrix};
use desitter_core::curve::ARC_PANELS;
use desitter_core::{
    cone_geodesic_curve, construct_rectifying, corollary_roundtrip, fit_ratio_form, frames_along, frames_on,
    is_geodesic_on_cone, recover_apex, reextract_frames, synthesize_from_curvatures, ArcLengthMap, Cone, ConeParams,
    CurvatureProfile, EtaProfile, FramedSample, GeometryError, Point, Vec4,
};

fn e2() -> Point {
    Point::new(Vec4::basis(1)).unwrap()
}

#[test]
fn hyperbolic_profile_survives_synthesis_and_extraction() {
    let profile = hyperbolic_torsion_profile::<f64>();
    let init = FramedSample::canonical(0.0, 10.0, 4.0);
    let out = synthesize_from_curvatures(&profile, &init, (-1.0, 1.0), 1e-3).unwrap();
    assert!(out.iter().all(|f| f.relative_gram_error() < 1e-9));
    let back = reextract_frames(&out).unwrap();
    let worst =
        back.iter().map(|f| (f.kappa_g - 10.0).abs().max((f.tau_g - profile.tau(f.s)).abs())).fold(0.0, f64::max);
    assert!(worst < 1e-5, "worst {worst}");
    let fit = fit_ratio_form(&back).unwrap();
    assert!((fit.sinh_coeff - 0.2).abs() < 1e-4 && (fit.cosh_coeff - 0.2).abs() < 1e-4);
    assert!(fit.admissible);
    // normals reach ~1e4 in Euclidean size at the ends
    let (p, res) = recover_apex(&out).unwrap();
    assert!(res < 1e-6, "{res}");
    assert!(out.iter().all(|f| p.vec().dot(&f.normal).abs() < 1e-9 * f.normal.euclidean_norm()));
}

#[test]
fn linear_ratio_is_not_rectifying() {
    let profile = CurvatureProfile::new(|_| 1.0, |s| s);
    let init = FramedSample::canonical(0.0, 1.0, 0.0);
    let out = synthesize_from_curvatures(&profile, &init, (-1.0, 1.0), 1e-3).unwrap();
    let fit = fit_ratio_form(&out).unwrap();
    assert!(fit.residual_rms > 1e-2 && !fit.rectifying);
    match recover_apex(&out) {
        Err(GeometryError::NotRectifying { .. }) => {}
        Ok((_, res)) => assert!(res > 1e-3),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn construction_over_cusp_directrix_is_a_cone_geodesic() {
    let eta = EtaProfile::new(1.0, 0.0).unwrap();
    let alpha = construct_rectifying(&e2(), &cusp_directrix(), eta, (0.1, 0.8)).unwrap();
    let map = ArcLengthMap::new(&alpha, ARC_PANELS).unwrap();
    let n = 401;
    let len = map.total_length();
    let path: Vec<(f64, f64, f64)> = (0..n)
        .map(|i| {
            let s = len * i as f64 / (n - 1) as f64;
            let t = map.param_at(s);
            (t, eta.eval(t), s)
        })
        .collect();
    let cone = Cone::new(e2(), cusp_directrix());
    let test = is_geodesic_on_cone(&cone, &path).unwrap();
    assert!(test.is_geodesic && test.max_residual < 1e-4, "{test:?}");

    let samples = frames_on(&map, 0.0, len, 301).unwrap();
    let (p, res) = recover_apex(&samples).unwrap();
    assert!((p.vec() - Vec4::basis(1)).max_abs() < 1e-5 && res < 1e-6);
}

#[test]
fn cone_geodesic_has_hyperbolic_ratio() {
    let cone = Cone::new(e2(), small_circle_directrix(0.6, -0.8, (-3.0, 3.0)));
    let params = ConeParams::new(0.3, 0.1, 0.0, false).unwrap();
    let curve = cone_geodesic_curve(&cone, &params, (-0.5, 0.5));
    let samples: Vec<_> =
        frames_along(&curve, 201).unwrap().into_iter().map(|f| FramedSample { s: f.t, ..f }).collect();
    let fit = fit_ratio_form(&samples).unwrap();
    let (mu1, mu2) = params.ratio_coefficients();
    assert!((fit.sinh_coeff - mu1).abs() < 1e-3 && (fit.cosh_coeff - mu2).abs() < 1e-3, "{fit:?}");
    assert!((mu1 + 0.1 / params.c).abs() < 1e-15 && (mu2 + 0.3 / params.c).abs() < 1e-15);
}

#[test]
fn spiral_directrix_gives_constant_curvature() {
    let r = corollary_roundtrip(1.0, 0.0, 2.0, (-1.0, 1.0), 1e-3).unwrap();
    assert_eq!(r.b, 4.0);
    assert!(r.max_kappa_error < 1e-3);
    assert!(r.ratio_fit.admissible && r.ratio_fit.residual_rms < 1e-3);
}

#[test]
fn round_trip_error_shrinks_with_step() {
    let profile = CurvatureProfile::new(|s: f64| 1.0 + 0.2 * s * s, |s: f64| 0.5 * s.sin());
    let err = |step: f64| {
        let init = FramedSample::canonical(0.0, 1.0, 0.0);
        let out = synthesize_from_curvatures(&profile, &init, (-1.0, 1.0), step).unwrap();
        reextract_frames(&out)
            .unwrap()
            .iter()
            .map(|f| (f.kappa_g - profile.kappa(f.s)).abs().max((f.tau_g - profile.tau(f.s)).abs()))
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(1e-2), err(1e-3));
    assert!(coarse < 1e-5 && fine < 1e-5);
    assert!(coarse / fine > 500.0, "{coarse:e} vs {fine:e}");
}
