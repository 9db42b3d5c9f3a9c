//! Truncated bivariate Taylor jets.
//!
//! A jet of order `n` at a point is the Taylor polynomial in the offsets
//! `(δ1, δ2)` with all terms of total degree `> n` dropped. Quotients and
//! compositions of jets give exact higher derivatives without symbolic
//! chain rules.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly2;
use crate::scalar::{factorial, Scalar};

/// Jet from partial derivatives `partials[a][b] = ∂^{a+b} / ∂x^a ∂y^b`,
/// defined for `a + b <= order`.
pub fn from_partials<T: Scalar>(partials: &[Vec<T>], order: usize) -> Poly2<T> {
    let mut j = Poly2::with_degrees(order, order);
    for (a, row) in partials.iter().enumerate().take(order + 1) {
        for (b, v) in row.iter().enumerate().take(order + 1 - a) {
            j.set_coeff(a, b, v.clone() / (factorial::<T>(a) * factorial::<T>(b)));
        }
    }
    j
}

/// Inverse of [`from_partials`].
pub fn to_partials<T: Scalar>(jet: &Poly2<T>, order: usize) -> Vec<Vec<T>> {
    (0..=order).map(|a| (0..=order - a).map(|b| jet.derivative_at_origin(a, b)).collect()).collect()
}

pub fn truncate<T: Scalar>(p: &Poly2<T>, order: usize) -> Poly2<T> {
    let mut out = Poly2::with_degrees(order.min(p.degree_x()), order.min(p.degree_y()));
    for a in 0..=order.min(p.degree_x()) {
        for b in 0..=(order - a).min(p.degree_y()) {
            out.set_coeff(a, b, p.coeff(a, b));
        }
    }
    out
}

pub fn mul<T: Scalar>(x: &Poly2<T>, y: &Poly2<T>, order: usize) -> Poly2<T> {
    truncate(&truncate(x, order).mul(&truncate(y, order)), order)
}

/// `x / y` as a jet; `y` must have a nonzero constant term.
pub fn div<T: Scalar>(x: &Poly2<T>, y: &Poly2<T>, order: usize) -> Result<Poly2<T>> {
    let y0 = y.coeff(0, 0);
    if y0.is_zero() {
        return Err(Error::SingularSystem { rank: 0, expected: 1 });
    }
    let mut q = Poly2::with_degrees(order, order);
    for d in 0..=order {
        for a in 0..=d {
            let b = d - a;
            let mut acc = x.coeff(a, b);
            for a1 in 0..=a {
                for b1 in 0..=b {
                    if a1 + b1 == 0 {
                        continue;
                    }
                    let yc = y.coeff(a1, b1);
                    if !yc.is_zero() {
                        acc = acc - yc * q.coeff(a - a1, b - b1);
                    }
                }
            }
            q.set_coeff(a, b, acc / y0.clone());
        }
    }
    Ok(q)
}

/// `p(x(δ), y(δ))` as a jet, where `x` and `y` have zero constant term.
pub fn compose<T: Scalar>(p: &Poly2<T>, x: &Poly2<T>, y: &Poly2<T>, order: usize) -> Poly2<T> {
    let xs = powers(x, p.degree_x().min(order), order);
    let ys = powers(y, p.degree_y().min(order), order);
    let mut out = Poly2::zero();
    for (a, xa) in xs.iter().enumerate() {
        for (b, yb) in ys.iter().enumerate().take(order + 1 - a) {
            let c = p.coeff(a, b);
            if !c.is_zero() {
                out = out.add(&mul(xa, yb, order).scale(&c));
            }
        }
    }
    out
}

fn powers<T: Scalar>(x: &Poly2<T>, n: usize, order: usize) -> Vec<Poly2<T>> {
    let mut out = vec![Poly2::constant(T::one())];
    for _ in 0..n {
        let next = mul(out.last().expect("nonempty"), x, order);
        out.push(next);
    }
    out
}

/// Monomials `(a, b)` with `a + b <= order`, graded by total degree.
pub fn graded_monomials(order: usize) -> Vec<(usize, usize)> {
    (0..=order).flat_map(|d| (0..=d).map(move |a| (d - a, a))).collect()
}

/// Given the jet of `Φ = φ ∘ G` and the jets `X`, `Y` of `G - G(point)` in
/// parameter offsets, recovers the physical partials
/// `out[a][b] = ∂^{a+b} φ / ∂x^a ∂y^b` for `a + b <= order` by matching
/// `Φ = Σ c_ab X^a Y^b` term by term.
pub fn push_forward<T: Scalar>(phi: &Poly2<T>, x: &Poly2<T>, y: &Poly2<T>, order: usize) -> Result<Vec<Vec<T>>> {
    Ok(push_forward_many(std::slice::from_ref(phi), x, y, order)?.pop().expect("one jet in, one out"))
}

/// [`push_forward`] for several jets sharing the same map.
pub fn push_forward_many<T: Scalar>(
    phis: &[Poly2<T>],
    x: &Poly2<T>,
    y: &Poly2<T>,
    order: usize,
) -> Result<Vec<Vec<Vec<T>>>> {
    let monos = graded_monomials(order);
    let n = monos.len();
    let xs = powers(x, order, order);
    let ys = powers(y, order, order);
    let mut m = Matrix::<T>::zeros(n, n);
    for (col, &(a, b)) in monos.iter().enumerate() {
        let term = mul(&xs[a], &ys[b], order);
        for (row, &(i, j)) in monos.iter().enumerate() {
            m[(row, col)] = term.coeff(i, j);
        }
    }
    let mut rhs = Matrix::<T>::zeros(n, phis.len());
    for (c, phi) in phis.iter().enumerate() {
        for (row, &(i, j)) in monos.iter().enumerate() {
            rhs[(row, c)] = phi.coeff(i, j);
        }
    }
    let sol = m.solve(&rhs).map_err(|e| match e {
        Error::SingularSystem { .. } => {
            let det = x.coeff(1, 0) * y.coeff(0, 1) - x.coeff(0, 1) * y.coeff(1, 0);
            Error::SingularJacobian { s: f64::NAN, t: f64::NAN, det: det.to_f64() }
        }
        other => other,
    })?;
    Ok((0..phis.len())
        .map(|c| {
            let mut out: Vec<Vec<T>> = (0..=order).map(|a| vec![T::zero(); order + 1 - a]).collect();
            for (row, &(a, b)) in monos.iter().enumerate() {
                out[a][b] = sol[(row, c)].clone() * factorial::<T>(a) * factorial::<T>(b);
            }
            out
        })
        .collect())
}
