mod common;

use common::rng;
use igs_core::error::Error;
use igs_core::geometry::{invert_geometry, GeometryMap, IsogeometricFunction, Locus, SingularityType};
use igs_core::presets::{quarter_disk_geometry, uniform_space};
use igs_core::spline::SplineCoefficients;
use rand::Rng;

/// Regular rational bicubic map: the unit square bent by a smooth
/// perturbation, with a non-constant positive weight.
fn warped_square() -> GeometryMap<f64> {
    let space = uniform_space(3);
    let (ns, nt) = space.shape();
    let mut w = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..ns {
        for j in 0..nt {
            let (a, b) = (i as f64 / (ns - 1) as f64, j as f64 / (nt - 1) as f64);
            let weight = 1.0 + 0.3 * a * (1.0 - b);
            w.push(weight);
            x.push(weight * (a + 0.1 * (3.0 * b).sin()));
            y.push(weight * (b + 0.1 * a * a));
        }
    }
    let f = |v: &[f64]| SplineCoefficients::from_flat(space.clone(), v).unwrap();
    GeometryMap::new(f(&w), f(&x), f(&y)).unwrap()
}

#[test]
fn jacobian_matches_central_differences() {
    let geos = [warped_square(), quarter_disk_geometry(3).unwrap().to_f64()];
    let mut g = rng(17);
    for geo in &geos {
        for _ in 0..100 {
            let (s, t) = (g.gen_range(0.05..0.95), g.gen_range(0.05..0.95));
            let jac = geo.jacobian(&s, &t).unwrap();
            let h = 1e-6;
            let e = |a: f64, b: f64| geo.eval(&a, &b).unwrap();
            let (xp, xm) = (e(s + h, t), e(s - h, t));
            let (yp, ym) = (e(s, t + h), e(s, t - h));
            for d in 0..2 {
                let ds = (xp[d] - xm[d]) / (2.0 * h);
                let dt = (yp[d] - ym[d]) / (2.0 * h);
                assert!((jac[d][0] - ds).abs() <= 1e-6 * jac[d][0].abs().max(1.0), "{} vs {ds}", jac[d][0]);
                assert!((jac[d][1] - dt).abs() <= 1e-6 * jac[d][1].abs().max(1.0), "{} vs {dt}", jac[d][1]);
            }
        }
    }
}

#[test]
fn inversion_round_trip() {
    let mut g = rng(23);
    for (geo, s_min) in [(warped_square(), 0.01f64), (quarter_disk_geometry(2).unwrap().to_f64(), 0.05)] {
        for _ in 0..500 {
            let (s, t) = (g.gen_range(s_min..0.99), g.gen_range(0.01..0.99));
            let x = geo.eval(&s, &t).unwrap();
            let guess = geo.seed_for(x);
            let (s1, t1) = invert_geometry(&geo, x, guess).unwrap();
            assert!((s1 - s).abs() <= 1e-10 && (t1 - t).abs() <= 1e-10, "({s}, {t}) -> ({s1}, {t1})");
        }
    }
}

#[test]
fn exterior_point_is_reported() {
    let geo = quarter_disk_geometry(2).unwrap().to_f64();
    let err = geo.invert([2.0, 2.0], None).unwrap_err();
    assert!(matches!(err, Error::InversionDiverged { .. }), "{err:?}");
}

#[test]
fn collapsed_edge_is_type_a() {
    let geo = quarter_disk_geometry(3).unwrap();
    let r = geo.classify_singularity().unwrap();
    assert_eq!((r.kind, r.locus), (SingularityType::A, Locus::EdgeS0));
    for k in 0..=10 {
        let t = k as f64 / 10.0;
        assert_eq!(geo.to_f64().eval(&0.0, &t).unwrap(), [0.0, 0.0]);
        assert!(geo.to_f64().det_jacobian(&0.0, &t).unwrap().abs() < 1e-12);
    }
    assert_eq!(warped_square().classify_singularity().unwrap().kind, SingularityType::Regular);
}

#[test]
fn isogeometric_function_of_a_coordinate() {
    // f = g1 makes φ the physical x coordinate: gradient (1, 0), zero Hessian.
    let geo = warped_square();
    let phi = IsogeometricFunction::new(geo.clone(), geo.g1.clone()).unwrap();
    let x = geo.eval(&0.3, &0.6).unwrap();
    assert!((phi.eval_at(x, (0, 0)).unwrap() - x[0]).abs() < 1e-12);
    assert!((phi.eval_at(x, (1, 0)).unwrap() - 1.0).abs() < 1e-9);
    assert!(phi.eval_at(x, (0, 1)).unwrap().abs() < 1e-9);
    assert!(phi.eval_at(x, (1, 1)).unwrap().abs() < 1e-7);
}
