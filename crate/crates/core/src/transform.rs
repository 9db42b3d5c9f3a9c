//! Exact construction matrices: Bernstein degree elevation, knot insertion
//! and their product.
//!
//! Orientation: basis functions are column vectors and `coarse = M * fine`.
//! A matrix with `m` rows therefore expresses `m` coarse functions in terms
//! of `M.cols()` fine ones.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::scalar::{binomial, Rational};
use crate::spline::KnotVector;

/// `E^q_i`: row `ℓ` holds the degree-`q` Bernstein coefficients of `b^i_ℓ`.
pub fn degree_elevation_matrix(i: usize, q: usize) -> Result<RationalMatrix> {
    if i > q {
        return Err(Error::InvalidElevation { from: i, to: q });
    }
    let mut m = RationalMatrix::zeros(i + 1, q + 1);
    for l in 0..=i {
        for j in l..=(l + q - i) {
            m[(l, j)] = Rational::new(binomial(i, l) * binomial(q - i, j - l), binomial(q, j));
        }
    }
    Ok(m)
}

/// Boehm insertion of one knot. Row `r` expresses `B_r` on `kv` through
/// the basis on the refined vector, which is returned alongside.
pub fn single_knot_insertion_matrix(kv: &KnotVector, new_knot: &Rational) -> Result<(RationalMatrix, KnotVector)> {
    if *new_knot <= Rational::zero() || *new_knot >= Rational::one() {
        return Err(Error::KnotOutsideDomain { knot: crate::scalar::rational_to_f64(new_knot) });
    }
    let p = kv.degree();
    let knots = kv.knots();
    let n = kv.num_basis();
    let existing = kv.multiplicity(new_knot);
    if existing + 1 > p {
        return Err(Error::KnotMultiplicity {
            knot: crate::scalar::rational_to_f64(new_knot),
            multiplicity: existing + 1,
            degree: p,
        });
    }
    // span k with knots[k] <= x < knots[k+1]
    let k = (p..n).rev().find(|&k| knots[k] <= *new_knot).expect("x > 0 lies in some span");
    let alpha = |i: usize| -> Rational {
        if i + p <= k {
            Rational::one()
        } else if i > k {
            Rational::zero()
        } else {
            (new_knot.clone() - knots[i].clone()) / (knots[i + p].clone() - knots[i].clone())
        }
    };
    let mut m = RationalMatrix::zeros(n, n + 1);
    for i in 0..n {
        m[(i, i)] = alpha(i);
        m[(i, i + 1)] = Rational::one() - alpha(i + 1);
    }
    let mut refined = knots.to_vec();
    refined.insert(k + 1, new_knot.clone());
    Ok((m, KnotVector::new(p, refined)?))
}

/// `K_τ` from `kv_from` to the knot vector with the given interior knots,
/// as the product of single insertions in ascending order.
pub fn knot_insertion_matrix(kv_from: &KnotVector, interior_knots: &[Rational]) -> Result<RationalMatrix> {
    if interior_knots.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedKnots);
    }
    let target = KnotVector::open(kv_from.degree(), interior_knots)?;
    if !target.contains_knots_of(kv_from) {
        return Err(Error::NotARefinement);
    }
    let mut pending: Vec<Rational> = Vec::new();
    for (knot, m) in target.interior_breaks() {
        let have = kv_from.multiplicity(&knot);
        pending.extend(std::iter::repeat(knot).take(m - have));
    }
    let mut kv = kv_from.clone();
    let mut acc = RationalMatrix::identity(kv.num_basis());
    for x in &pending {
        let (step, refined) = single_knot_insertion_matrix(&kv, x)?;
        acc = acc.mul(&step)?;
        kv = refined;
    }
    Ok(acc)
}

/// `E^q_i K_τ`: the B-spline coefficients over `kv_t` of `b^i_j`, one row
/// per `j`. Multiplying row `j` by `B^p_i(s)` gives the smooth function
/// `B̃_(i,j)` restricted to the tensor row `i`.
pub fn combined_row_coefficients(i: usize, k: usize, q: usize, kv_t: &KnotVector) -> Result<RationalMatrix> {
    if kv_t.degree() != q {
        return Err(Error::DegreeMismatch { expected: q, found: kv_t.degree() });
    }
    if k > q {
        return Err(Error::OrderTooLarge { order: k, max: q });
    }
    if i > k {
        return Err(Error::InvalidElevation { from: i, to: k });
    }
    let e = degree_elevation_matrix(i, q)?;
    let kt = knot_insertion_matrix(&KnotVector::bezier(q), kv_t.interior_knots())?;
    e.mul(&kt)
}
