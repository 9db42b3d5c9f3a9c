#![allow(dead_code)]

use igs_core::scalar::{rat, Rational};
use igs_core::spline::KnotVector;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in `[lo, hi]` with denominator `den`.
pub fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// Interior knots `k / 16`, sorted, each with multiplicity at most `max_mult`.
pub fn interior_knots(max_count: usize, max_mult: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_map(1i64..16, 1..=max_mult.max(1), 0..=max_count).prop_map(|m| {
        m.into_iter().flat_map(|(k, mult)| std::iter::repeat(rat(k, 16)).take(mult)).collect()
    })
}

pub fn knot_vector(degree: usize, max_count: usize, max_mult: usize) -> impl Strategy<Value = KnotVector> {
    interior_knots(max_count, max_mult).prop_map(move |k| KnotVector::open(degree, &k).unwrap())
}

/// Parameter `k / 97` in `[0, 1]`.
pub fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=97).prop_map(|k| rat(k, 97))
}
