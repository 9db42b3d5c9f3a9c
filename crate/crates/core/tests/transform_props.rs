mod common;

use common::{interior_knots, random_rational, rng};
use igs_core::matrix::RationalMatrix;
use igs_core::scalar::{rat, rat_int, Rational};
use igs_core::spline::{bernstein_all, KnotVector};
use igs_core::transform::{combined_row_coefficients, degree_elevation_matrix, knot_insertion_matrix};
use num_traits::{One, Signed};
use proptest::prelude::*;

fn rows(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    m.row_iter().map(<[Rational]>::to_vec).collect()
}

fn r(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn example_knots() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 2), rat(3, 4)]
}

proptest! {
    #[test]
    fn elevation_is_column_stochastic((i, q) in (0usize..9).prop_flat_map(|q| (0..=q, Just(q)))) {
        // Partition of unity in both bases: every column sums to one.
        let e = degree_elevation_matrix(i, q).unwrap();
        prop_assert_eq!(e.shape(), (i + 1, q + 1));
        prop_assert!(e.column_sums().iter().all(|s| s.is_one()));
        prop_assert!(e.as_slice().iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn elevation_preserves_values((i, q) in (0usize..7).prop_flat_map(|q| (0..=q, Just(q))), k in 0i64..=31) {
        let t = rat(k, 31);
        let low = bernstein_all(i, &t);
        let high = bernstein_all(q, &t);
        let e = degree_elevation_matrix(i, q).unwrap();
        prop_assert_eq!(e.mul_vec(&high).unwrap(), low);
    }

    #[test]
    fn insertion_preserves_values(
        p in 1usize..5,
        coarse in interior_knots(3, 1),
        extra in interior_knots(3, 1),
        seed in any::<u64>(),
    ) {
        let kv = KnotVector::open(p, &coarse).unwrap();
        let mut fine: Vec<Rational> = coarse.iter().chain(&extra).cloned().collect();
        fine.sort();
        // Keep every multiplicity at most p.
        fine.dedup_by(|a, b| a == b && p == 1);
        let Ok(kv_fine) = KnotVector::open(p, &fine) else { return Ok(()) };
        let k = knot_insertion_matrix(&kv, kv_fine.interior_knots()).unwrap();
        prop_assert_eq!(k.shape(), (kv.num_basis(), kv_fine.num_basis()));
        prop_assert!(k.column_sums().iter().all(|s| s.is_one()));
        prop_assert!(k.as_slice().iter().all(|x| !x.is_negative()));
        let mut g = rng(seed);
        for _ in 0..100 {
            let x = random_rational(&mut g, 0, 1, 1000);
            let coarse_vals = kv.eval_all(&x).unwrap();
            let fine_vals = kv_fine.eval_all(&x).unwrap();
            prop_assert_eq!(k.mul_vec(&fine_vals).unwrap(), coarse_vals);
        }
    }
}

#[test]
fn quadratic_elevation_matrices() {
    assert_eq!(rows(&degree_elevation_matrix(0, 2).unwrap()), vec![vec![rat_int(1); 3]]);
    assert_eq!(
        rows(&degree_elevation_matrix(1, 2).unwrap()),
        vec![r(&[(1, 1), (1, 2), (0, 1)]), r(&[(0, 1), (1, 2), (1, 1)])]
    );
    assert_eq!(degree_elevation_matrix(2, 2).unwrap(), RationalMatrix::identity(3));
}

#[test]
fn cubic_elevation_matrix() {
    assert_eq!(
        rows(&degree_elevation_matrix(2, 3).unwrap()),
        vec![
            r(&[(1, 1), (1, 3), (0, 1), (0, 1)]),
            r(&[(0, 1), (2, 3), (2, 3), (0, 1)]),
            r(&[(0, 1), (0, 1), (1, 3), (1, 1)]),
        ]
    );
    assert_eq!(
        rows(&degree_elevation_matrix(1, 3).unwrap()),
        vec![r(&[(1, 1), (2, 3), (1, 3), (0, 1)]), r(&[(0, 1), (1, 3), (2, 3), (1, 1)])]
    );
}

#[test]
fn quadratic_insertion_matrix() {
    let k = knot_insertion_matrix(&KnotVector::bezier(2), &example_knots()).unwrap();
    assert_eq!(
        rows(&k),
        vec![
            r(&[(1, 1), (3, 4), (3, 8), (1, 8), (0, 1), (0, 1)]),
            r(&[(0, 1), (1, 4), (1, 2), (1, 2), (1, 4), (0, 1)]),
            r(&[(0, 1), (0, 1), (1, 8), (3, 8), (3, 4), (1, 1)]),
        ]
    );
}

#[test]
fn cubic_insertion_matrix() {
    let k = knot_insertion_matrix(&KnotVector::bezier(3), &example_knots()).unwrap();
    assert_eq!(k.shape(), (4, 7));
    assert_eq!(k.row(0), r(&[(1, 1), (3, 4), (3, 8), (3, 32), (0, 1), (0, 1), (0, 1)]));
    assert_eq!(k.row(1), r(&[(0, 1), (1, 4), (1, 2), (13, 32), (1, 8), (0, 1), (0, 1)]));
}

#[test]
fn combined_rows_of_the_examples() {
    let kv2 = KnotVector::open(2, &example_knots()).unwrap();
    let m = combined_row_coefficients(1, 2, 2, &kv2).unwrap();
    assert_eq!(
        rows(&m),
        vec![
            r(&[(1, 1), (7, 8), (5, 8), (3, 8), (1, 8), (0, 1)]),
            r(&[(0, 1), (1, 8), (3, 8), (5, 8), (7, 8), (1, 1)]),
        ]
    );
    assert_eq!(combined_row_coefficients(2, 2, 2, &kv2).unwrap().row(1), r(&[(0, 1), (1, 4), (1, 2), (1, 2), (1, 4), (0, 1)]));

    let kv3 = KnotVector::open(3, &example_knots()).unwrap();
    let m = combined_row_coefficients(2, 3, 3, &kv3).unwrap();
    assert_eq!(m.row(0), r(&[(1, 1), (5, 6), (13, 24), (11, 48), (1, 24), (0, 1), (0, 1)]));
    assert_eq!(combined_row_coefficients(3, 3, 3, &kv3).unwrap().row(0), r(&[(1, 1), (3, 4), (3, 8), (3, 32), (0, 1), (0, 1), (0, 1)]));
}

#[test]
fn combined_rows_reproduce_bernstein_profiles() {
    // Row j of E^q_i K_τ, read as B-spline coefficients, is b^i_j(t).
    let kv = KnotVector::open(3, &[rat(1, 5), rat(1, 2), rat(1, 2)]).unwrap();
    for i in 0..=3 {
        let m = combined_row_coefficients(i, 3, 3, &kv).unwrap();
        for k in 0..=40 {
            let t = rat(k, 40);
            let vals = kv.eval_all(&t).unwrap();
            assert_eq!(m.mul_vec(&vals).unwrap(), bernstein_all(i, &t), "i={i} t={t}");
        }
    }
}
