//! Triangular Bernstein bases, triangular Bézier patches and the singular
//! bilinear reparameterizations that turn them into tensor-product patches.
//!
//! Type A lives on `Δ_A = {0 <= u <= 1, 0 <= v <= u}` and is reached through
//! `u_A(s, t) = (s, s t)`. Type B lives on `Δ_B = {0 <= u <= 1, u - 1 <= v <= 1 - u}`
//! and is reached through `u_B(s, t) = (s t, t - s)`.

use crate::error::{Error, Result};
use crate::poly::Poly2;
use crate::scalar::{factorial, pow, Scalar};
use crate::spline::{bernstein_all, KnotVector, SplineCoefficients, TensorProductSpace};
use crate::transform::degree_elevation_matrix;

/// What to do with points slightly outside a triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DomainPolicy {
    #[default]
    Reject,
    Clamp,
}

fn domain_tol<T: Scalar>() -> T {
    if T::EXACT {
        T::zero()
    } else {
        T::from_ratio(1, 1_000_000_000_000)
    }
}

fn outside<T: Scalar>(u: &T, v: &T) -> Error {
    Error::PointOutsideTriangle { u: u.to_f64(), v: v.to_f64() }
}

fn clamp<T: Scalar>(x: T, lo: &T, hi: &T) -> T {
    if x < *lo {
        lo.clone()
    } else if x > *hi {
        hi.clone()
    } else {
        x
    }
}

/// Checks `(u, v) ∈ Δ_A`, returning the (possibly clamped) point.
pub fn check_domain_a<T: Scalar>(u: &T, v: &T, policy: DomainPolicy) -> Result<(T, T)> {
    let tol = domain_tol::<T>();
    let inside = *u >= -tol.clone()
        && *u <= T::one() + tol.clone()
        && *v >= -tol.clone()
        && v.clone() <= u.clone() + tol.clone();
    match (inside, policy) {
        (true, _) | (false, DomainPolicy::Clamp) => {
            let u = clamp(u.clone(), &T::zero(), &T::one());
            let v = clamp(v.clone(), &T::zero(), &u);
            Ok((u, v))
        }
        (false, DomainPolicy::Reject) => Err(outside(u, v)),
    }
}

/// Checks `(u, v) ∈ Δ_B`, returning the (possibly clamped) point.
pub fn check_domain_b<T: Scalar>(u: &T, v: &T, policy: DomainPolicy) -> Result<(T, T)> {
    let tol = domain_tol::<T>();
    let one = T::one();
    let inside = *u >= -tol.clone()
        && *u <= one.clone() + tol.clone()
        && v.clone() >= u.clone() - one.clone() - tol.clone()
        && v.clone() <= one.clone() - u.clone() + tol.clone();
    match (inside, policy) {
        (true, _) | (false, DomainPolicy::Clamp) => {
            let u = clamp(u.clone(), &T::zero(), &one);
            let w = one - u.clone();
            let v = clamp(v.clone(), &-w.clone(), &w);
            Ok((u, v))
        }
        (false, DomainPolicy::Reject) => Err(outside(u, v)),
    }
}

/// All `(i, j, k)` with `i + j + k = p`, in storage order.
pub fn multi_indices_a(p: usize) -> Vec<(usize, usize, usize)> {
    (0..=p).flat_map(|i| (0..=p - i).map(move |j| (i, j, p - i - j))).collect()
}

/// All `(i, j)` with `i + j <= k`, in storage order.
pub fn multi_indices_b(k: usize) -> Vec<(usize, usize)> {
    (0..=k).flat_map(|i| (0..=k - i).map(move |j| (i, j))).collect()
}

fn simplex_position(p: usize, i: usize, j: usize) -> usize {
    i * (p + 1) - i * i.saturating_sub(1) / 2 + j
}

fn multinomial<T: Scalar>(n: usize, parts: &[usize]) -> T {
    parts.iter().fold(factorial::<T>(n), |acc, &m| acc / factorial::<T>(m))
}

/// `β^p_(i,j,k)(u, v) = p!/(i! j! k!) (1-u)^i v^j (u-v)^k` on `Δ_A`.
pub fn eval_tri_bernstein_a<T: Scalar>(p: usize, idx: (usize, usize, usize), u: &T, v: &T) -> Result<T> {
    eval_tri_bernstein_a_with(p, idx, u, v, DomainPolicy::Reject)
}

pub fn eval_tri_bernstein_a_with<T: Scalar>(
    p: usize,
    (i, j, k): (usize, usize, usize),
    u: &T,
    v: &T,
    policy: DomainPolicy,
) -> Result<T> {
    if i + j + k != p {
        return Err(Error::InvalidMultiIndex { index: (i, j, k), degree: p });
    }
    let (u, v) = check_domain_a(u, v, policy)?;
    Ok(multinomial::<T>(p, &[i, j, k]) * pow(&(T::one() - u.clone()), i) * pow(&v, j) * pow(&(u - v.clone()), k))
}

/// `β^k_(i,j)(u, v) = k!/(i! j! (k-i-j)!) ((1-u-v)/2)^i ((1-u+v)/2)^j u^(k-i-j)` on `Δ_B`.
pub fn eval_tri_bernstein_b<T: Scalar>(k: usize, idx: (usize, usize), u: &T, v: &T) -> Result<T> {
    eval_tri_bernstein_b_with(k, idx, u, v, DomainPolicy::Reject)
}

pub fn eval_tri_bernstein_b_with<T: Scalar>(
    k: usize,
    (i, j): (usize, usize),
    u: &T,
    v: &T,
    policy: DomainPolicy,
) -> Result<T> {
    if i + j > k {
        return Err(Error::InvalidMultiIndex { index: (i, j, 0), degree: k });
    }
    let (u, v) = check_domain_b(u, v, policy)?;
    let two = T::from_i64(2);
    let a = (T::one() - u.clone() - v.clone()) / two.clone();
    let b = (T::one() - u.clone() + v) / two;
    Ok(multinomial::<T>(k, &[i, j, k - i - j]) * pow(&a, i) * pow(&b, j) * pow(&u, k - i - j))
}

/// `β^p_(i,j,k)` as a polynomial in `(u, v)`.
pub fn tri_bernstein_a_poly<T: Scalar>(p: usize, (i, j, k): (usize, usize, usize)) -> Result<Poly2<T>> {
    if i + j + k != p {
        return Err(Error::InvalidMultiIndex { index: (i, j, k), degree: p });
    }
    let one_minus_u = Poly2::constant(T::one()).sub(&Poly2::x());
    let u_minus_v = Poly2::x().sub(&Poly2::y());
    Ok(one_minus_u
        .powi(i)
        .mul(&Poly2::y().powi(j))
        .mul(&u_minus_v.powi(k))
        .scale(&multinomial::<T>(p, &[i, j, k])))
}

/// `β^k_(i,j)` of type B as a polynomial in `(u, v)`.
pub fn tri_bernstein_b_poly<T: Scalar>(k: usize, (i, j): (usize, usize)) -> Result<Poly2<T>> {
    if i + j > k {
        return Err(Error::InvalidMultiIndex { index: (i, j, 0), degree: k });
    }
    let half = T::from_ratio(1, 2);
    let one = Poly2::constant(T::one());
    let a = one.sub(&Poly2::x()).sub(&Poly2::y()).scale(&half);
    let b = one.sub(&Poly2::x()).add(&Poly2::y()).scale(&half);
    Ok(a.powi(i).mul(&b.powi(j)).mul(&Poly2::x().powi(k - i - j)).scale(&multinomial::<T>(k, &[i, j, k - i - j])))
}

/// `u_A(s, t) = (s, s t)`.
pub fn reparam_a<T: Scalar>(s: &T, t: &T) -> (T, T) {
    (s.clone(), s.clone() * t.clone())
}

/// `u_A^{-1}(u, v) = (u, v / u)`, undefined on the collapsed edge `u = 0`.
pub fn reparam_a_inverse<T: Scalar>(u: &T, v: &T) -> Result<(T, T)> {
    if u.is_zero() {
        return Err(Error::SingularPoint);
    }
    Ok((u.clone(), v.clone() / u.clone()))
}

/// `u_B(s, t) = (s t, t - s)`.
pub fn reparam_b<T: Scalar>(s: &T, t: &T) -> (T, T) {
    (s.clone() * t.clone(), t.clone() - s.clone())
}

/// Components of `u_A` as polynomials in `(s, t)`.
pub fn reparam_a_polys<T: Scalar>() -> (Poly2<T>, Poly2<T>) {
    (Poly2::x(), Poly2::x().mul(&Poly2::y()))
}

/// Components of `u_B` as polynomials in `(s, t)`.
pub fn reparam_b_polys<T: Scalar>() -> (Poly2<T>, Poly2<T>) {
    (Poly2::x().mul(&Poly2::y()), Poly2::y().sub(&Poly2::x()))
}

fn check_points<T>(points: &[Vec<T>], expected: usize, degree: usize) -> Result<usize> {
    if points.len() != expected {
        return Err(Error::IncompletePatch { degree, expected, found: points.len() });
    }
    let dim = points[0].len();
    if !(1..=4).contains(&dim) || points.iter().any(|c| c.len() != dim) {
        return Err(Error::RaggedControlPoints);
    }
    Ok(dim)
}

/// Triangular Bézier patch over `Δ_A` with control points in `R^d`, `1 <= d <= 4`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularPatchA<T> {
    degree: usize,
    /// In [`multi_indices_a`] order.
    points: Vec<Vec<T>>,
}

impl<T: Scalar> TriangularPatchA<T> {
    /// `points` in [`multi_indices_a`] order.
    pub fn new(degree: usize, points: Vec<Vec<T>>) -> Result<Self> {
        check_points(&points, (degree + 1) * (degree + 2) / 2, degree)?;
        Ok(Self { degree, points })
    }

    /// Builds from explicit `((i, j, k), coords)` pairs in any order.
    pub fn from_indexed(degree: usize, entries: Vec<((usize, usize, usize), Vec<T>)>) -> Result<Self> {
        let n = (degree + 1) * (degree + 2) / 2;
        let mut slots: Vec<Option<Vec<T>>> = vec![None; n];
        for ((i, j, k), c) in entries {
            if i + j + k != degree {
                return Err(Error::InvalidMultiIndex { index: (i, j, k), degree });
            }
            let pos = simplex_position(degree, i, j);
            if slots[pos].replace(c).is_some() {
                return Err(Error::Format(format!("duplicate control point ({i}, {j}, {k})")));
            }
        }
        let found = slots.iter().filter(|s| s.is_some()).count();
        if found != n {
            return Err(Error::IncompletePatch { degree, expected: n, found });
        }
        Self::new(degree, slots.into_iter().map(Option::unwrap).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> Result<&[T]> {
        if i + j + k != self.degree {
            return Err(Error::InvalidMultiIndex { index: (i, j, k), degree: self.degree });
        }
        Ok(&self.points[simplex_position(self.degree, i, j)])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TriangularPatchA<U> {
        TriangularPatchA { degree: self.degree, points: self.points.iter().map(|c| c.iter().map(&f).collect()).collect() }
    }

    /// `ρ(u, v)`.
    pub fn eval(&self, u: &T, v: &T) -> Result<Vec<T>> {
        let (u, v) = check_domain_a(u, v, DomainPolicy::Reject)?;
        let mut out = vec![T::zero(); self.dim()];
        for (idx, c) in multi_indices_a(self.degree).into_iter().zip(&self.points) {
            let b = eval_tri_bernstein_a_with(self.degree, idx, &u, &v, DomainPolicy::Clamp)?;
            for (o, x) in out.iter_mut().zip(c) {
                *o = o.clone() + b.clone() * x.clone();
            }
        }
        Ok(out)
    }

    /// Component `d` as a polynomial in `(u, v)`.
    pub fn component_poly(&self, d: usize) -> Poly2<T> {
        let mut acc = Poly2::zero();
        for (idx, c) in multi_indices_a(self.degree).into_iter().zip(&self.points) {
            let b = tri_bernstein_a_poly::<T>(self.degree, idx).expect("valid index");
            acc = acc.add(&b.scale(&c[d]));
        }
        acc
    }
}

/// Tensor-product Bézier control net `f[i][j]` of degree `(p, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorNet<T> {
    pub degree: usize,
    pub points: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> TensorNet<T> {
    pub fn eval(&self, s: &T, t: &T) -> Vec<T> {
        let bs = bernstein_all(self.degree, s);
        let bt = bernstein_all(self.degree, t);
        let dim = self.points[0][0].len();
        let mut out = vec![T::zero(); dim];
        for (row, ws) in self.points.iter().zip(&bs) {
            for (c, wt) in row.iter().zip(&bt) {
                let w = ws.clone() * wt.clone();
                for (o, x) in out.iter_mut().zip(c) {
                    *o = o.clone() + w.clone() * x.clone();
                }
            }
        }
        out
    }

    /// One spline per coordinate on the Bézier space of degree `(p, p)`.
    pub fn to_components(&self) -> Vec<SplineCoefficients<T>> {
        let p = self.degree;
        let space = TensorProductSpace::new(KnotVector::bezier(p), KnotVector::bezier(p));
        let dim = self.points[0][0].len();
        (0..dim)
            .map(|d| {
                let flat: Vec<T> = self.points.iter().flat_map(|row| row.iter().map(move |c| c[d].clone())).collect();
                SplineCoefficients::from_flat(space.clone(), &flat).expect("net is square")
            })
            .collect()
    }
}

/// Converts a type-A triangular patch to the equivalent degenerate tensor
/// patch `f = ρ ∘ u_A`. Row `i` is the degree elevation of the boundary
/// curve `ρ_(p-i, ℓ, i-ℓ)`, so row `0` repeats `ρ_(p,0,0)`.
pub fn tri_to_tensor<T: Scalar>(patch: &TriangularPatchA<T>) -> TensorNet<T> {
    let p = patch.degree;
    let dim = patch.dim();
    let mut points = vec![vec![vec![T::zero(); dim]; p + 1]; p + 1];
    for (i, row) in points.iter_mut().enumerate() {
        let e = degree_elevation_matrix(i, p).expect("i <= p");
        for (j, out) in row.iter_mut().enumerate() {
            for l in 0..=i {
                let w = T::from_rational(&e[(l, j)]);
                if w.is_zero() {
                    continue;
                }
                let rho = &patch.points[simplex_position(p, p - i, l)];
                for (o, x) in out.iter_mut().zip(rho) {
                    *o = o.clone() + w.clone() * x.clone();
                }
            }
        }
    }
    TensorNet { degree: p, points }
}

/// Triangle `Δ_B` together with the construction order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangularDomainB {
    pub degree: usize,
}

impl TriangularDomainB {
    pub fn contains<T: Scalar>(&self, u: &T, v: &T) -> bool {
        check_domain_b(u, v, DomainPolicy::Reject).is_ok()
    }
}

/// Triangular patch over `Δ_B` in the type-B Bernstein basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularPatchB<T> {
    degree: usize,
    /// In [`multi_indices_b`] order.
    points: Vec<Vec<T>>,
}

impl<T: Scalar> TriangularPatchB<T> {
    pub fn new(degree: usize, points: Vec<Vec<T>>) -> Result<Self> {
        check_points(&points, (degree + 1) * (degree + 2) / 2, degree)?;
        Ok(Self { degree, points })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn point(&self, i: usize, j: usize) -> Result<&[T]> {
        if i + j > self.degree {
            return Err(Error::InvalidMultiIndex { index: (i, j, 0), degree: self.degree });
        }
        Ok(&self.points[simplex_position(self.degree, i, j)])
    }

    pub fn eval(&self, u: &T, v: &T) -> Result<Vec<T>> {
        let (u, v) = check_domain_b(u, v, DomainPolicy::Reject)?;
        let mut out = vec![T::zero(); self.dim()];
        for (idx, c) in multi_indices_b(self.degree).into_iter().zip(&self.points) {
            let b = eval_tri_bernstein_b_with(self.degree, idx, &u, &v, DomainPolicy::Clamp)?;
            for (o, x) in out.iter_mut().zip(c) {
                *o = o.clone() + b.clone() * x.clone();
            }
        }
        Ok(out)
    }

    pub fn component_poly(&self, d: usize) -> Poly2<T> {
        let mut acc = Poly2::zero();
        for (idx, c) in multi_indices_b(self.degree).into_iter().zip(&self.points) {
            let b = tri_bernstein_b_poly::<T>(self.degree, idx).expect("valid index");
            acc = acc.add(&b.scale(&c[d]));
        }
        acc
    }
}

/// Represents `ρ ∘ u` for every coordinate of a patch in a tensor spline
/// space whose degrees are at least the composed bidegree. This is exact
/// degree elevation plus knot insertion in one step.
pub fn compose_into_space<T: Scalar>(
    components: &[Poly2<T>],
    reparam: &(Poly2<T>, Poly2<T>),
    space: &TensorProductSpace,
) -> Result<Vec<SplineCoefficients<T>>> {
    components
        .iter()
        .map(|c| SplineCoefficients::from_polynomial(space.clone(), &c.compose(&reparam.0, &reparam.1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rational};

    #[test]
    fn bernstein_a_values() {
        assert_eq!(eval_tri_bernstein_a(2, (1, 1, 0), &rat(1, 2), &rat(1, 4)).unwrap(), rat(1, 4));
        assert_eq!(eval_tri_bernstein_a(3, (3, 0, 0), &rat_int(0), &rat_int(0)).unwrap(), rat_int(1));
        assert!(matches!(
            eval_tri_bernstein_a(2, (1, 1, 1), &0.5, &0.1),
            Err(Error::InvalidMultiIndex { .. })
        ));
        assert!(matches!(
            eval_tri_bernstein_a(2, (1, 1, 0), &0.5, &0.6),
            Err(Error::PointOutsideTriangle { .. })
        ));
        assert!(eval_tri_bernstein_a_with(2, (1, 1, 0), &0.5, &0.6, DomainPolicy::Clamp).is_ok());
    }

    #[test]
    fn bernstein_b_values() {
        assert_eq!(eval_tri_bernstein_b(2, (1, 1), &rat_int(0), &rat_int(0)).unwrap(), rat(1, 2));
        assert_eq!(eval_tri_bernstein_b(3, (0, 0), &rat_int(1), &rat_int(0)).unwrap(), rat_int(1));
        assert!(eval_tri_bernstein_b(2, (2, 1), &0.1, &0.0).is_err());
        assert!(eval_tri_bernstein_b(2, (0, 0), &0.5, &0.6).is_err());
    }

    #[test]
    fn reparam_values() {
        assert_eq!(reparam_a(&0.5, &0.4), (0.5, 0.2));
        assert_eq!(reparam_a_inverse(&0.0, &0.0), Err(Error::SingularPoint));
        assert_eq!(reparam_b(&rat_int(1), &rat_int(0)), (rat_int(0), rat_int(-1)));
        assert_eq!(reparam_b(&rat_int(0), &rat_int(1)), (rat_int(0), rat_int(1)));
        assert_eq!(reparam_b(&rat_int(1), &rat_int(1)), (rat_int(1), rat_int(0)));
    }

    #[test]
    fn patch_indexing() {
        let pts: Vec<Vec<f64>> = (0..6).map(|n| vec![n as f64]).collect();
        let patch = TriangularPatchA::new(2, pts).unwrap();
        for (n, (i, j, k)) in multi_indices_a(2).into_iter().enumerate() {
            assert_eq!(patch.point(i, j, k).unwrap(), &[n as f64]);
        }
        assert!(matches!(TriangularPatchA::new(2, vec![vec![0.0]; 5]), Err(Error::IncompletePatch { .. })));
        let mut ragged = vec![vec![0.0]; 6];
        ragged[3] = vec![0.0, 1.0];
        assert_eq!(TriangularPatchA::new(2, ragged).unwrap_err(), Error::RaggedControlPoints);
    }

    #[test]
    fn bernstein_polys_match_evaluation() {
        let (u, v) = (rat(2, 3), rat(1, 5));
        for idx in multi_indices_a(3) {
            let poly = tri_bernstein_a_poly::<Rational>(3, idx).unwrap();
            assert_eq!(poly.eval(&u, &v), eval_tri_bernstein_a(3, idx, &u, &v).unwrap());
        }
        let (u, v) = (rat(1, 3), rat(-1, 5));
        for idx in multi_indices_b(3) {
            let poly = tri_bernstein_b_poly::<Rational>(3, idx).unwrap();
            assert_eq!(poly.eval(&u, &v), eval_tri_bernstein_b(3, idx, &u, &v).unwrap());
        }
    }
}
