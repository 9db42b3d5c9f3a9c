mod common;

use common::{random_rational, rng};
use igs_core::scalar::{rat, rat_int, Rational};
use igs_core::triangular::{
    eval_tri_bernstein_a, eval_tri_bernstein_b, multi_indices_a, multi_indices_b, reparam_a, reparam_a_inverse,
    reparam_b, tri_to_tensor, TriangularDomainB, TriangularPatchA,
};
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;

fn random_patch(seed: u64) -> TriangularPatchA<Rational> {
    let mut g = rng(seed);
    let p = g.gen_range(1..=4);
    let dim = g.gen_range(1..=3);
    let n = (p + 1) * (p + 2) / 2;
    let points = (0..n).map(|_| (0..dim).map(|_| random_rational(&mut g, -5, 5, 7)).collect()).collect();
    TriangularPatchA::new(p, points).unwrap()
}

#[test]
fn tensor_conversion_matches_composition() {
    for seed in 0..20 {
        let patch = random_patch(seed);
        let p = patch.degree();
        let net = tri_to_tensor(&patch);
        let apex = patch.point(p, 0, 0).unwrap().to_vec();
        assert!(net.points[0].iter().all(|c| *c == apex), "row 0 must repeat the apex");
        let mut g = rng(1000 + seed);
        for _ in 0..200 {
            let s = random_rational(&mut g, 0, 1, 101);
            let t = random_rational(&mut g, 0, 1, 103);
            let (u, v) = reparam_a(&s, &t);
            assert_eq!(net.eval(&s, &t), patch.eval(&u, &v).unwrap(), "seed {seed} at ({s}, {t})");
        }
    }
}

proptest! {
    #[test]
    fn type_a_bernstein_partition_of_unity(p in 0usize..6, a in 0i64..=40, b in 0i64..=40) {
        let (u, v) = (rat(a.max(b), 40), rat(a.min(b), 40));
        let sum: Rational = multi_indices_a(p).into_iter().map(|idx| eval_tri_bernstein_a(p, idx, &u, &v).unwrap()).sum();
        prop_assert!(sum.is_one());
    }

    #[test]
    fn type_b_bernstein_partition_of_unity(k in 0usize..6, a in 0i64..=40, b in -40i64..=40) {
        let u = rat(a, 40);
        let v = rat(b, 40);
        let dom = TriangularDomainB { degree: k };
        prop_assume!(dom.contains(&u, &v));
        let sum: Rational = multi_indices_b(k).into_iter().map(|idx| eval_tri_bernstein_b(k, idx, &u, &v).unwrap()).sum();
        prop_assert!(sum.is_one());
    }

    #[test]
    fn type_a_reparam_inverts_off_the_edge(a in 1i64..=50, b in 0i64..=50) {
        let (s, t) = (rat(a, 50), rat(b, 50));
        let (u, v) = reparam_a(&s, &t);
        prop_assert_eq!(reparam_a_inverse(&u, &v).unwrap(), (s, t));
    }
}

#[test]
fn bernstein_direct_values() {
    assert_eq!(eval_tri_bernstein_a(2, (1, 1, 0), &rat(1, 2), &rat(1, 4)).unwrap(), rat(1, 4));
    assert_eq!(eval_tri_bernstein_b(2, (1, 1), &rat_int(0), &rat_int(0)).unwrap(), rat(1, 2));
}

#[test]
fn type_b_corner_images() {
    let z = rat_int(0);
    let one = rat_int(1);
    assert_eq!(reparam_b(&z, &z), (z.clone(), z.clone()));
    assert_eq!(reparam_b(&one, &z), (z.clone(), -one.clone()));
    assert_eq!(reparam_b(&z, &one), (z.clone(), one.clone()));
    assert_eq!(reparam_b(&one, &one), (one.clone(), z.clone()));
}

#[test]
fn type_a_edge_collapses() {
    for k in 0..=8 {
        let (u, v) = reparam_a(&rat_int(0), &rat(k, 8));
        assert_eq!((u, v), (rat_int(0), rat_int(0)));
    }
    assert!(reparam_a_inverse(&rat_int(0), &rat_int(0)).is_err());
}
