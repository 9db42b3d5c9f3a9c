mod common;

use common::rng;
use igs_core::geometry::{GeometryMap, IsogeometricFunction};
use igs_core::presets::{quarter_disk_geometry, quarter_disk_triangle, quarter_disk_weight, type_a_geometry, uniform_space};
use igs_core::scalar::{rat, rat_int, Rational};
use igs_core::singular_basis::build_smooth_space_a;
use igs_core::smoothness::{
    physical_partials_triangle_route, verify_ck, verify_ck_many, verify_split, JetMismatch, Mode, Tolerances,
};
use igs_core::spline::SplineCoefficients;
use igs_core::triangular::TriangularPatchA;
use rand::Rng;

fn smooth_functions<T: igs_core::scalar::Scalar>(p: usize, k: usize) -> Vec<SplineCoefficients<T>> {
    let sm = build_smooth_space_a(&uniform_space(p), k).unwrap();
    (0..sm.len()).map(|n| sm.function(n).unwrap().map(T::from_rational)).collect()
}

#[test]
fn members_pass_and_verdicts_are_consistent() {
    let geo = quarter_disk_geometry(2).unwrap().to_f64();
    let tol = Tolerances::default();
    let verdicts = verify_ck_many(&geo, &smooth_functions::<f64>(2, 2), 2, &tol).unwrap();
    for v in &verdicts {
        assert!(v.passed(), "{:?}", v.limit_spread);
        assert_eq!(v.mode, Mode::Float);
        assert!(v.paths.len() >= 5);
        for n in 0..=2 {
            assert_eq!(v.pass[n], v.max_spread(n) <= v.tolerance[n]);
            assert!(v.max_spread(n) < 1e-6);
        }
        assert!(v.tolerance.windows(2).all(|w| w[0] <= w[1]));
        assert!(v.boundary.regular);
    }
}

#[test]
fn non_member_fails_at_first_order() {
    let space = uniform_space(2);
    let f = SplineCoefficients::<Rational>::unit(space, 1, 1).unwrap();
    let geo = quarter_disk_geometry(2).unwrap();
    let phi = IsogeometricFunction::new(geo, f).unwrap();
    let v = verify_ck(&phi, 1, &Tolerances::default()).unwrap();
    assert_eq!(v.mode, Mode::Exact);
    assert!(v.pass[0]);
    assert!(!v.pass[1]);
    assert!(v.max_spread(1) > 1e-2);
    assert!(!v.passed());
}

#[test]
fn exact_path_samples_form_a_cauchy_sequence() {
    let geo = quarter_disk_geometry(2).unwrap();
    let fs = smooth_functions::<Rational>(2, 2);
    let v = verify_ck_many(&geo, &fs[1..3], 2, &Tolerances::default()).unwrap();
    for verdict in &v {
        for trace in &verdict.traces {
            let tail: Vec<&Vec<Vec<f64>>> =
                trace.samples.iter().rev().take(6).map(|s| s.partials.as_ref().unwrap()).collect();
            for a in 0..=2 {
                for b in 0..=2 - a {
                    let diffs: Vec<f64> = tail.windows(2).map(|w| (w[0][a][b] - w[1][a][b]).abs()).collect();
                    // Deeper shells move less: differences shrink toward the limit.
                    for d in diffs.windows(2) {
                        assert!(d[0] <= d[1] + 1e-12, "{} d{a}{b}: {diffs:?}", trace.path);
                    }
                    assert!(diffs[0] < 1e-3, "{} d{a}{b}: {diffs:?}", trace.path);
                }
            }
        }
    }
}

#[test]
fn triangle_route_agrees_with_tensor_route() {
    let geo = quarter_disk_geometry(3).unwrap().to_f64();
    let fs = smooth_functions::<f64>(3, 3);
    let mut g = rng(29);
    for _ in 0..40 {
        let (s, t) = (g.gen_range(0.05..1.0), g.gen_range(0.0..=1.0));
        let n = g.gen_range(0..fs.len());
        let direct = geo.physical_partials_many(std::slice::from_ref(&fs[n]), &s, &t, 3).unwrap().remove(0);
        let routed = physical_partials_triangle_route(&geo, &fs[n], &s, &t, 3).unwrap();
        for a in 0..=3 {
            for b in 0..=3 - a {
                let (x, y) = (direct[a][b], routed[a][b]);
                assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "({s}, {t}) d{a}{b}: {x} vs {y}");
            }
        }
    }
}

fn exact_triangle() -> TriangularPatchA<Rational> {
    quarter_disk_triangle(quarter_disk_weight())
}

#[test]
fn split_of_a_composed_geometry_passes() {
    let geo = quarter_disk_geometry(3).unwrap();
    let report = verify_split(&geo, &exact_triangle(), 3).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.min_abs_det > 1e-3);
}

#[test]
fn folded_patch_is_irregular() {
    // Row i = 1 collapses onto the apex: the map folds at u = 0.
    let t = exact_triangle();
    let apex = t.point(2, 0, 0).unwrap().to_vec();
    let mut entries = Vec::new();
    for (i, j, k) in igs_core::triangular::multi_indices_a(2) {
        let c = if i == 1 { apex.clone() } else { t.point(i, j, k).unwrap().to_vec() };
        entries.push(((i, j, k), c));
    }
    let folded = TriangularPatchA::from_indexed(2, entries).unwrap();
    let geo = type_a_geometry(&folded, &uniform_space(2)).unwrap();
    let report = verify_split(&geo, &folded, 2).unwrap();
    assert!(report.jet_mismatch.is_none());
    assert!(!report.regular);
    assert!(!report.passed());
    let (i, j) = report.worst_node;
    assert!(j <= i && i <= report.grid);
}

#[test]
fn perturbation_is_located() {
    let geo = quarter_disk_geometry(2).unwrap();
    let mut g1 = geo.g1.clone();
    let c = g1.coeffs()[(1, 2)].clone() + rat(1, 10);
    g1.coeffs_mut()[(1, 2)] = c;
    let perturbed = GeometryMap::new(geo.g0.clone(), g1, geo.g2.clone()).unwrap();
    let report = verify_split(&perturbed, &exact_triangle(), 2).unwrap();
    assert_eq!(report.jet_mismatch, Some(JetMismatch { component: 1, s_order: 1, t_index: 2 }));
    // Rows above the tested order are free.
    let mut g2 = geo.g2.clone();
    let c = g2.coeffs()[(3, 1)].clone() + rat_int(1);
    g2.coeffs_mut()[(3, 1)] = c;
    let free = GeometryMap::new(geo.g0.clone(), geo.g1.clone(), g2).unwrap();
    assert!(verify_split(&free, &exact_triangle(), 2).unwrap().jet_mismatch.is_none());
}
