mod common;

use common::{knot_vector, unit_rational};
use igs_core::scalar::{binomial, rat, rat_int, Rational, Scalar};
use igs_core::spline::{eval_bernstein, KnotVector, SplineCoefficients, TensorProductSpace};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

proptest! {
    #[test]
    fn partition_of_unity(kv in (1usize..5).prop_flat_map(|p| knot_vector(p, 4, p)), x in unit_rational()) {
        let sum: Rational = kv.eval_all(&x).unwrap().into_iter().sum();
        prop_assert_eq!(sum, Rational::one());
    }

    #[test]
    fn nonnegative_with_local_support(kv in (1usize..5).prop_flat_map(|p| knot_vector(p, 4, p)), x in unit_rational()) {
        let p = kv.degree();
        let knots = kv.knots();
        for i in 0..kv.num_basis() {
            let v = kv.eval(i, &x).unwrap();
            prop_assert!(!v.is_negative());
            let inside = knots[i] <= x && x <= knots[i + p + 1];
            if !inside {
                prop_assert!(v.is_zero(), "B_{} nonzero outside its support at {}", i, x);
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference(kv in (2usize..5).prop_flat_map(|p| knot_vector(p, 3, 1)), k in 1i64..96) {
        // Away from knots the basis is smooth; step 1e-6 stays inside one span
        // for these 1/16-spaced knots unless x sits on a knot.
        let x = k as f64 / 97.0;
        let h = 1e-6;
        for i in 0..kv.num_basis() {
            let d = kv.eval_derivative(i, &x, 1).unwrap();
            let fd = (kv.eval(i, &(x + h)).unwrap() - kv.eval(i, &(x - h)).unwrap()) / (2.0 * h);
            prop_assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "i={} d={} fd={}", i, d, fd);
        }
    }

    #[test]
    fn bernstein_matches_binomial_formula(n in 0usize..8, k in 0i64..=12) {
        let t = rat(k, 12);
        for i in 0..=n {
            let expected = Rational::from_integer(binomial(n, i))
                * num_traits::pow(t.clone(), i)
                * num_traits::pow(Rational::one() - &t, n - i);
            prop_assert_eq!(eval_bernstein(n, i, &t).unwrap(), expected);
        }
    }
}

#[test]
fn bernstein_value_from_binomial_oracle() {
    assert_eq!(eval_bernstein(3, 2, &rat(1, 4)).unwrap(), rat(9, 64));
}

#[test]
fn dimension_of_tensor_space() {
    let kv_s = KnotVector::open(2, &[rat(1, 4), rat(1, 2), rat(3, 4)]).unwrap();
    let kv_t = KnotVector::open(3, &[rat(1, 3)]).unwrap();
    let space = TensorProductSpace::new(kv_s, kv_t);
    assert_eq!(space.shape(), (6, 5));
    assert_eq!(space.dim(), 30);
}

#[test]
fn mixed_partial_matches_stencil() {
    let kv = KnotVector::open(3, &[rat(1, 4), rat(1, 2), rat(3, 4)]).unwrap();
    let space = TensorProductSpace::new(kv.clone(), kv);
    let flat: Vec<f64> = (0..space.dim()).map(|n| ((n * 37 % 11) as f64 - 5.0) / 3.0).collect();
    let f = SplineCoefficients::from_flat(space, &flat).unwrap();
    let (s, t, h) = (0.37, 0.61, 1e-4);
    let exact = f.eval_derivative(&s, &t, 1, 1).unwrap();
    let e = |a: f64, b: f64| f.eval(&(s + a), &(t + b)).unwrap();
    let fd = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
    assert!((exact - fd).abs() < 1e-5 * exact.abs().max(1.0), "{exact} vs {fd}");
}

#[test]
fn exact_and_float_evaluation_agree() {
    let kv = KnotVector::open(2, &[rat(1, 3), rat(1, 3), rat(2, 3)]).unwrap();
    for k in 0..=30 {
        let x = rat(k, 30);
        for i in 0..kv.num_basis() {
            let e = kv.eval(i, &x).unwrap();
            let f = kv.eval(i, &x.to_f64()).unwrap();
            assert!((e.to_f64() - f).abs() < 1e-14);
        }
    }
    assert_eq!(kv.eval(0, &rat_int(0)).unwrap(), Rational::one());
    assert_eq!(kv.eval(kv.num_basis() - 1, &rat_int(1)).unwrap(), Rational::one());
}
