//! Univariate and tensor-product B-splines on open knot vectors over `[0, 1]`.
//!
//! Knots are stored as exact rationals. Evaluation is generic over
//! [`Scalar`], so the same code yields exact values at rational points and
//! fast `f64` values for sampling. Evaluation is right-continuous at knots,
//! except at `1` where the left limit is used.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly2;
use crate::scalar::{binomial_scalar, factorial, pow, rational_to_f64, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector {
    degree: usize,
    knots: Vec<Rational>,
}

impl KnotVector {
    /// Validates a full knot vector of length `N + 2p + 2`.
    pub fn new(degree: usize, knots: Vec<Rational>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidKnotVector(msg));
        let needed = degree.saturating_mul(2).saturating_add(2);
        if knots.len() < needed {
            return bad(format!("need at least {needed} knots for degree {degree}, found {}", knots.len()));
        }
        if knots.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsortedKnots);
        }
        let (zero, one) = (Rational::zero(), Rational::one());
        let n = knots.len();
        if knots[..=degree].iter().any(|k| *k != zero) || knots[n - degree - 1..].iter().any(|k| *k != one) {
            return bad(format!("knot vector must be open: first and last {} knots must be 0 and 1", degree + 1));
        }
        let interior = &knots[degree + 1..n - degree - 1];
        if let Some(k) = interior.iter().find(|k| **k <= zero || **k >= one) {
            return Err(Error::KnotOutsideDomain { knot: rational_to_f64(k) });
        }
        let kv = Self { degree, knots };
        for (knot, m) in kv.interior_breaks() {
            if m > degree {
                return Err(Error::KnotMultiplicity { knot: rational_to_f64(&knot), multiplicity: m, degree });
            }
        }
        Ok(kv)
    }

    /// Open knot vector with the given interior knots.
    pub fn open(degree: usize, interior: &[Rational]) -> Result<Self> {
        let mut knots = vec![Rational::zero(); degree + 1];
        knots.extend(interior.iter().cloned());
        knots.extend(std::iter::repeat(Rational::one()).take(degree + 1));
        Self::new(degree, knots)
    }

    /// Knot vector of the Bernstein basis of the given degree.
    pub fn bezier(degree: usize) -> Self {
        Self::open(degree, &[]).expect("Bezier knot vector is valid")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[Rational] {
        &self.knots
    }

    pub fn interior_knots(&self) -> &[Rational] {
        &self.knots[self.degree + 1..self.knots.len() - self.degree - 1]
    }

    /// Number of basis functions, `N + p + 1`.
    pub fn num_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Distinct interior knots with their multiplicities.
    pub fn interior_breaks(&self) -> Vec<(Rational, usize)> {
        let mut out: Vec<(Rational, usize)> = Vec::new();
        for k in self.interior_knots() {
            match out.last_mut() {
                Some((last, m)) if last == k => *m += 1,
                _ => out.push((k.clone(), 1)),
            }
        }
        out
    }

    pub fn max_interior_multiplicity(&self) -> usize {
        self.interior_breaks().iter().map(|(_, m)| *m).max().unwrap_or(0)
    }

    /// Upper end of the first nonempty knot span.
    pub fn first_break(&self) -> &Rational {
        &self.knots[self.degree + 1]
    }

    pub fn multiplicity(&self, knot: &Rational) -> usize {
        self.interior_knots().iter().filter(|k| *k == knot).count()
    }

    /// Greville abscissae, one per basis function.
    pub fn greville(&self) -> Vec<Rational> {
        let p = self.degree;
        if p == 0 {
            // Degree zero: midpoints of the (single) span.
            return (0..self.num_basis())
                .map(|i| (self.knots[i].clone() + self.knots[i + 1].clone()) / Rational::from_integer(2.into()))
                .collect();
        }
        (0..self.num_basis())
            .map(|i| {
                let sum = self.knots[i + 1..=i + p].iter().cloned().fold(Rational::zero(), |a, b| a + b);
                sum / Rational::from_integer((p as i64).into())
            })
            .collect()
    }

    fn check_param<T: Scalar>(&self, x: &T) -> Result<()> {
        if *x < T::zero() || *x > T::one() || x.to_f64().is_nan() {
            return Err(Error::ParameterOutOfRange { value: x.to_f64() });
        }
        Ok(())
    }

    /// Span index `k` with `knots[k] <= x < knots[k+1]`, using the last
    /// nonempty span for `x = 1`.
    pub fn find_span<T: Scalar>(&self, x: &T) -> usize {
        let p = self.degree;
        let n = self.num_basis();
        if *x >= T::one() {
            return n - 1;
        }
        let mut span = p;
        while span + 1 < n && T::from_rational(&self.knots[span + 1]) <= *x {
            span += 1;
        }
        span
    }

    /// Derivatives `0..=order` of the `p + 1` basis functions that are
    /// nonzero on `span`. `out[k][j]` is the k-th derivative of
    /// `B_{span - p + j}`.
    pub fn basis_derivatives_on_span<T: Scalar>(&self, span: usize, x: &T, order: usize) -> Vec<Vec<T>> {
        let p = self.degree;
        let knot = |i: usize| T::from_rational(&self.knots[i]);
        let mut ndu = vec![vec![T::zero(); p + 1]; p + 1];
        let mut left = vec![T::zero(); p + 1];
        let mut right = vec![T::zero(); p + 1];
        ndu[0][0] = T::one();
        for j in 1..=p {
            left[j] = x.clone() - knot(span + 1 - j);
            right[j] = knot(span + j) - x.clone();
            let mut saved = T::zero();
            for r in 0..j {
                ndu[j][r] = right[r + 1].clone() + left[j - r].clone();
                let temp = ndu[r][j - 1].clone() / ndu[j][r].clone();
                ndu[r][j] = saved + right[r + 1].clone() * temp.clone();
                saved = left[j - r].clone() * temp;
            }
            ndu[j][j] = saved;
        }

        let mut ders = vec![vec![T::zero(); p + 1]; order + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p].clone();
        }
        let nd = order.min(p);
        let mut a = vec![vec![T::zero(); p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = T::one();
            for k in 1..=nd {
                let mut d = T::zero();
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    let rk = rk as usize;
                    a[s2][0] = a[s1][0].clone() / ndu[pk + 1][rk].clone();
                    d = a[s2][0].clone() * ndu[rk][pk].clone();
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j].clone() - a[s1][j - 1].clone()) / ndu[pk + 1][idx].clone();
                    d = d + a[s2][j].clone() * ndu[idx][pk].clone();
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1].clone() / ndu[pk + 1][r].clone();
                    d = d + a[s2][k].clone() * ndu[r][pk].clone();
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as i64;
        for (k, row) in ders.iter_mut().enumerate().take(nd + 1).skip(1) {
            for v in row.iter_mut() {
                *v = v.clone() * T::from_i64(factor);
            }
            factor *= (p - k) as i64;
        }
        ders
    }

    /// Value of `B^p_i` at `x`.
    pub fn eval<T: Scalar>(&self, i: usize, x: &T) -> Result<T> {
        self.eval_derivative(i, x, 0)
    }

    /// `order`-th derivative of `B^p_i` at `x`.
    pub fn eval_derivative<T: Scalar>(&self, i: usize, x: &T, order: usize) -> Result<T> {
        let n = self.num_basis();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
        }
        self.check_param(x)?;
        if order > self.degree {
            return Ok(T::zero());
        }
        let span = self.find_span(x);
        let p = self.degree;
        if i + p < span || i > span {
            return Ok(T::zero());
        }
        let ders = self.basis_derivatives_on_span(span, x, order);
        Ok(ders[order][i + p - span].clone())
    }

    /// All basis derivatives of order `0..=order` as dense rows of length
    /// `num_basis`.
    pub fn eval_all_derivatives<T: Scalar>(&self, x: &T, order: usize) -> Result<Vec<Vec<T>>> {
        self.check_param(x)?;
        let n = self.num_basis();
        let span = self.find_span(x);
        let local = self.basis_derivatives_on_span(span, x, order);
        let first = span - self.degree;
        Ok(local
            .into_iter()
            .map(|row| {
                let mut dense = vec![T::zero(); n];
                for (j, v) in row.into_iter().enumerate() {
                    dense[first + j] = v;
                }
                dense
            })
            .collect())
    }

    pub fn eval_all<T: Scalar>(&self, x: &T) -> Result<Vec<T>> {
        Ok(self.eval_all_derivatives(x, 0)?.swap_remove(0))
    }

    /// Taylor coefficients at `0` of every basis function restricted to the
    /// first knot span: `out[i][a]` multiplies `x^a` in `B_i`. Only
    /// `i <= p` can be nonzero there.
    pub fn first_span_monomials<T: Scalar>(&self) -> Vec<Vec<T>> {
        let p = self.degree;
        let ders = self.basis_derivatives_on_span(p, &T::zero(), p);
        let mut out = vec![vec![T::zero(); p + 1]; self.num_basis()];
        for (a, row) in ders.iter().enumerate() {
            let fa = factorial::<T>(a);
            for (j, v) in row.iter().enumerate() {
                out[j][a] = v.clone() / fa.clone();
            }
        }
        out
    }

    /// B-spline coefficients of `x^m`, `m <= p`, by the blossom
    /// (Marsden's identity): `e_m(τ_{j+1..j+p}) / C(p, m)`.
    pub fn monomial_coefficients<T: Scalar>(&self, m: usize) -> Result<Vec<T>> {
        let p = self.degree;
        if m > p {
            return Err(Error::InvalidElevation { from: m, to: p });
        }
        let denom = binomial_scalar::<T>(p, m);
        Ok((0..self.num_basis())
            .map(|j| {
                let local: Vec<T> = self.knots[j + 1..=j + p].iter().map(T::from_rational).collect();
                elementary_symmetric(&local, m) / denom.clone()
            })
            .collect())
    }

    /// B-spline coefficients of the polynomial `Σ a_m x^m`.
    pub fn polynomial_coefficients<T: Scalar>(&self, monomial: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.num_basis()];
        for (m, a) in monomial.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(self.monomial_coefficients::<T>(m)?) {
                *o = o.clone() + a.clone() * c;
            }
        }
        Ok(out)
    }

    /// Whether every interior knot of `coarse` appears here with at least
    /// the same multiplicity.
    pub fn contains_knots_of(&self, coarse: &Self) -> bool {
        coarse.interior_breaks().iter().all(|(k, m)| self.multiplicity(k) >= *m)
    }
}

fn elementary_symmetric<T: Scalar>(values: &[T], m: usize) -> T {
    let mut e = vec![T::zero(); m + 1];
    e[0] = T::one();
    for v in values {
        for k in (1..=m).rev() {
            e[k] = e[k].clone() + e[k - 1].clone() * v.clone();
        }
    }
    e[m].clone()
}

/// `b^degree_index(t) = C(degree, index) t^index (1 - t)^(degree - index)`.
pub fn eval_bernstein<T: Scalar>(degree: usize, index: usize, t: &T) -> Result<T> {
    if index > degree {
        return Err(Error::IndexOutOfRange { index, max: degree });
    }
    Ok(binomial_scalar::<T>(degree, index) * pow(t, index) * pow(&(T::one() - t.clone()), degree - index))
}

pub fn bernstein_all<T: Scalar>(degree: usize, t: &T) -> Vec<T> {
    (0..=degree).map(|j| eval_bernstein(degree, j, t).expect("index in range")).collect()
}

/// The spline space spanned by `B^p_i[S](s) B^q_j[T](t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorProductSpace {
    pub kv_s: KnotVector,
    pub kv_t: KnotVector,
}

impl TensorProductSpace {
    pub fn new(kv_s: KnotVector, kv_t: KnotVector) -> Self {
        Self { kv_s, kv_t }
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.kv_s.degree(), self.kv_t.degree())
    }

    /// `(N1 + p + 1, N2 + q + 1)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.kv_s.num_basis(), self.kv_t.num_basis())
    }

    pub fn dim(&self) -> usize {
        let (a, b) = self.shape();
        a * b
    }

    /// Flat index of `(i, j)`, row-major in `i`.
    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.kv_t.num_basis() + j
    }

    pub fn unflat(&self, idx: usize) -> (usize, usize) {
        let nt = self.kv_t.num_basis();
        (idx / nt, idx % nt)
    }
}

/// An element of the tensor-product spline space.
#[derive(Clone, Debug, PartialEq)]
pub struct SplineCoefficients<T> {
    space: TensorProductSpace,
    coeffs: Matrix<T>,
}

impl<T: Scalar> SplineCoefficients<T> {
    pub fn new(space: TensorProductSpace, coeffs: Matrix<T>) -> Result<Self> {
        if coeffs.shape() != space.shape() {
            return Err(Error::ShapeMismatch { expected: space.shape(), found: coeffs.shape() });
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: TensorProductSpace) -> Self {
        let (a, b) = space.shape();
        Self { coeffs: Matrix::zeros(a, b), space }
    }

    pub fn constant(space: TensorProductSpace, c: T) -> Self {
        let (a, b) = space.shape();
        let coeffs = Matrix::from_vec(a, b, vec![c; a * b]).expect("shape");
        Self { space, coeffs }
    }

    /// The standard basis function `B_i(s) B_j(t)`.
    pub fn unit(space: TensorProductSpace, i: usize, j: usize) -> Result<Self> {
        let (a, b) = space.shape();
        if i >= a || j >= b {
            return Err(Error::IndexOutOfRange { index: i.max(j), max: a.max(b) - 1 });
        }
        let mut f = Self::zeros(space);
        f.coeffs[(i, j)] = T::one();
        Ok(f)
    }

    pub fn from_flat(space: TensorProductSpace, flat: &[T]) -> Result<Self> {
        let (a, b) = space.shape();
        if flat.len() != a * b {
            return Err(Error::ShapeMismatch { expected: (a, b), found: (flat.len(), 1) });
        }
        Ok(Self { coeffs: Matrix::from_vec(a, b, flat.to_vec())?, space })
    }

    /// Exact B-spline representation of a polynomial of bidegree `<= (p, q)`.
    pub fn from_polynomial(space: TensorProductSpace, poly: &Poly2<T>) -> Result<Self> {
        let (p, q) = space.degrees();
        let tail_x = (p + 1..=poly.degree_x()).any(|a| (0..=poly.degree_y()).any(|b| !poly.coeff(a, b).is_zero()));
        let tail_y = (q + 1..=poly.degree_y()).any(|b| (0..=poly.degree_x()).any(|a| !poly.coeff(a, b).is_zero()));
        if tail_x || tail_y {
            return Err(Error::InvalidElevation { from: poly.degree_x().max(poly.degree_y()), to: p.min(q) });
        }
        let ms: Vec<Vec<T>> = (0..=p.min(poly.degree_x())).map(|a| space.kv_s.monomial_coefficients(a)).collect::<Result<_>>()?;
        let mt: Vec<Vec<T>> = (0..=q.min(poly.degree_y())).map(|b| space.kv_t.monomial_coefficients(b)).collect::<Result<_>>()?;
        let mut f = Self::zeros(space);
        let (ns, nt) = f.space.shape();
        for (a, sa) in ms.iter().enumerate() {
            for (b, tb) in mt.iter().enumerate() {
                let c = poly.coeff(a, b);
                if c.is_zero() {
                    continue;
                }
                for i in 0..ns {
                    for j in 0..nt {
                        f.coeffs[(i, j)] = f.coeffs[(i, j)].clone() + c.clone() * sa[i].clone() * tb[j].clone();
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn space(&self) -> &TensorProductSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &Matrix<T> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Matrix<T> {
        &mut self.coeffs
    }

    pub fn flat(&self) -> &[T] {
        self.coeffs.as_slice()
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> SplineCoefficients<U> {
        SplineCoefficients { space: self.space.clone(), coeffs: self.coeffs.map(f) }
    }

    pub fn to_f64(&self) -> SplineCoefficients<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.space != rhs.space {
            return Err(Error::ShapeMismatch { expected: self.space.shape(), found: rhs.space.shape() });
        }
        let data: Vec<T> = self.flat().iter().zip(rhs.flat()).map(|(a, b)| a.clone() + b.clone()).collect();
        Self::from_flat(self.space.clone(), &data)
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    /// Value of `∂^{ds+dt} f / ∂s^ds ∂t^dt` at `(s, t)`.
    pub fn eval_derivative(&self, s: &T, t: &T, ds: usize, dt: usize) -> Result<T> {
        let bs = self.space.kv_s.eval_all_derivatives(s, ds)?;
        let bt = self.space.kv_t.eval_all_derivatives(t, dt)?;
        Ok(self.contract(&bs[ds], &bt[dt]))
    }

    pub fn eval(&self, s: &T, t: &T) -> Result<T> {
        self.eval_derivative(s, t, 0, 0)
    }

    /// All partials with `ds + dt <= order`: `out[ds][dt]`.
    pub fn partials(&self, s: &T, t: &T, order: usize) -> Result<Vec<Vec<T>>> {
        let bs = self.space.kv_s.eval_all_derivatives(s, order)?;
        let bt = self.space.kv_t.eval_all_derivatives(t, order)?;
        Ok((0..=order)
            .map(|ds| (0..=order - ds).map(|dt| self.contract(&bs[ds], &bt[dt])).collect())
            .collect())
    }

    fn contract(&self, bs: &[T], bt: &[T]) -> T {
        let mut acc = T::zero();
        for (i, wi) in bs.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            let row = self.coeffs.row(i);
            let inner = row.iter().zip(bt).fold(T::zero(), |a, (c, w)| if w.is_zero() { a } else { a + c.clone() * w.clone() });
            acc = acc + wi.clone() * inner;
        }
        acc
    }
}

/// Free-function form of [`SplineCoefficients::eval_derivative`].
pub fn eval_spline_function<T: Scalar>(f: &SplineCoefficients<T>, s: &T, t: &T, ds: usize, dt: usize) -> Result<T> {
    f.eval_derivative(s, t, ds, dt)
}

/// Value of `B^p_i[S](s)`.
pub fn eval_bspline<T: Scalar>(kv: &KnotVector, i: usize, s: &T) -> Result<T> {
    kv.eval(i, s)
}

pub fn eval_bspline_derivative<T: Scalar>(kv: &KnotVector, i: usize, s: &T, order: usize) -> Result<T> {
    kv.eval_derivative(i, s, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn quarter_knots(p: usize) -> KnotVector {
        KnotVector::open(p, &[rat(1, 4), rat(1, 2), rat(3, 4)]).unwrap()
    }

    #[test]
    fn endpoint_and_hat_values() {
        let kv = quarter_knots(2);
        assert_eq!(kv.eval(0, &0.0).unwrap(), 1.0);
        let lin = KnotVector::bezier(1);
        assert!((lin.eval(0, &0.3).unwrap() - 0.7).abs() < 1e-15);
        // left limit at 1: last basis function is one.
        assert_eq!(kv.eval(kv.num_basis() - 1, &1.0).unwrap(), 1.0);
    }

    #[test]
    fn partition_of_unity_exact() {
        let kv = quarter_knots(3);
        for k in 0..=16 {
            let x = rat(k, 16);
            let sum = kv.eval_all::<Rational>(&x).unwrap().into_iter().fold(rat_int(0), |a, b| a + b);
            assert_eq!(sum, rat_int(1));
        }
    }

    #[test]
    fn errors_on_bad_inputs() {
        let kv = quarter_knots(2);
        assert!(matches!(kv.eval(6, &0.5), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(kv.eval(0, &1.5), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(kv.eval(0, &-0.1), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn rejects_invalid_knot_vectors() {
        assert!(KnotVector::new(2, vec![rat_int(0), rat_int(0), rat_int(1), rat_int(1), rat_int(1), rat_int(1)]).is_err());
        assert!(matches!(KnotVector::open(2, &[rat(1, 2), rat(1, 4)]), Err(Error::UnsortedKnots)));
        assert!(matches!(
            KnotVector::open(2, &[rat(1, 2), rat(1, 2), rat(1, 2)]),
            Err(Error::KnotMultiplicity { multiplicity: 3, .. })
        ));
        assert!(matches!(KnotVector::open(1, &[rat_int(1)]), Err(Error::KnotOutsideDomain { .. })));
    }

    #[test]
    fn derivative_above_degree_vanishes() {
        let kv = quarter_knots(2);
        for i in 0..kv.num_basis() {
            assert_eq!(kv.eval_derivative(i, &0.37, 3).unwrap(), 0.0);
        }
    }

    #[test]
    fn bernstein_values() {
        assert_eq!(eval_bernstein(2, 1, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(eval_bernstein(0, 0, &rat(5, 7)).unwrap(), rat_int(1));
        assert_eq!(eval_bernstein(3, 2, &rat(1, 4)).unwrap(), rat(9, 64));
        assert!(eval_bernstein::<f64>(2, 3, &0.5).is_err());
    }

    #[test]
    fn monomials_reproduce() {
        let kv = quarter_knots(3);
        for m in 0..=3 {
            let c: Vec<Rational> = kv.monomial_coefficients(m).unwrap();
            for k in 0..=10 {
                let x = rat(k, 10);
                let vals = kv.eval_all::<Rational>(&x).unwrap();
                let v = vals.iter().zip(&c).fold(rat_int(0), |a, (b, c)| a + b.clone() * c.clone());
                assert_eq!(v, num_traits::pow(x, m));
            }
        }
    }

    #[test]
    fn first_span_monomials_match_values() {
        let kv = quarter_knots(2);
        let mono = kv.first_span_monomials::<Rational>();
        let x = rat(1, 7);
        for (i, poly) in mono.iter().enumerate() {
            let v = poly.iter().rev().fold(rat_int(0), |a, c| a * x.clone() + c.clone());
            assert_eq!(v, kv.eval(i, &x).unwrap());
        }
        // B_i ~ s^i near zero.
        for (i, poly) in mono.iter().enumerate().take(3) {
            assert!(poly[..i].iter().all(|c| c.is_zero()));
            assert!(!poly[i].is_zero());
        }
    }

    #[test]
    fn tensor_unit_function() {
        let space = TensorProductSpace::new(quarter_knots(2), KnotVector::bezier(3));
        let f = SplineCoefficients::<f64>::unit(space.clone(), 2, 1).unwrap();
        let (s, t) = (0.3, 0.6);
        let expected = space.kv_s.eval(2, &s).unwrap() * space.kv_t.eval(1, &t).unwrap();
        assert!((f.eval(&s, &t).unwrap() - expected).abs() < 1e-15);
        let bad = Matrix::<f64>::zeros(2, 2);
        assert!(matches!(SplineCoefficients::new(space, bad), Err(Error::ShapeMismatch { .. })));
    }
}
