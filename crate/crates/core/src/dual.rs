//! Dual functionals for the type-A smooth basis.
//!
//! Univariate duals are realized by collocation: for a basis `φ_0..φ_n` and
//! nodes `x_0..x_n` with a nonsingular collocation matrix `C[m][i] = φ_i(x_m)`,
//! the functional `g ↦ Σ_m (C^{-1})[ℓ][m] g(x_m)` is dual to `φ_ℓ` on the
//! span. Nodes are Greville abscissae for B-splines and uniform points for
//! Bernstein polynomials. Bivariate duals are tensor products of these.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::scalar::{rat, Rational, Scalar};
use crate::singular_basis::{BasisLabel, SingularityKind, SmoothSpace};
use crate::spline::{bernstein_all, KnotVector, SplineCoefficients};

/// Condition estimates above this are reported as ill-conditioned.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualKind {
    /// `λ^s_i μ^i_j`, paired with a smooth function.
    SplineBernstein,
    /// `λ^s_i λ^t_j`, paired with a standard function.
    SplineSpline,
}

/// A linear functional `f ↦ Σ_n w_n f(s_n, t_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFunctional {
    pub label: BasisLabel,
    pub kind: DualKind,
    pub nodes: Vec<(Rational, Rational)>,
    pub weights: Vec<Rational>,
}

impl DualFunctional {
    pub fn apply<T: Scalar>(&self, f: &SplineCoefficients<T>) -> Result<T> {
        let mut acc = T::zero();
        for ((s, t), w) in self.nodes.iter().zip(&self.weights) {
            let v = f.eval(&T::from_rational(s), &T::from_rational(t))?;
            acc = acc + T::from_rational(w) * v;
        }
        Ok(acc)
    }
}

/// Weights and nodes of a univariate dual basis: `weights[ℓ][m]` at `nodes[m]`.
#[derive(Clone, Debug, PartialEq)]
struct Univariate {
    nodes: Vec<Rational>,
    weights: RationalMatrix,
}

fn invert_collocation(nodes: Vec<Rational>, colloc: RationalMatrix) -> Result<Univariate> {
    let condition = colloc.condition_estimate();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    Ok(Univariate { nodes, weights: colloc.inverse()? })
}

fn spline_dual(kv: &KnotVector) -> Result<Univariate> {
    let nodes = kv.greville();
    let rows = nodes.iter().map(|x| kv.eval_all::<Rational>(x)).collect::<Result<Vec<_>>>()?;
    invert_collocation(nodes, RationalMatrix::from_rows(rows)?)
}

fn bernstein_dual(degree: usize) -> Result<Univariate> {
    let nodes: Vec<Rational> =
        if degree == 0 { vec![rat(1, 2)] } else { (0..=degree).map(|m| rat(m as i64, degree as i64)).collect() };
    let rows = nodes.iter().map(|x| bernstein_all(degree, x)).collect();
    invert_collocation(nodes, RationalMatrix::from_rows(rows)?)
}

fn product(label: BasisLabel, kind: DualKind, a: &Univariate, la: usize, b: &Univariate, lb: usize) -> DualFunctional {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (m, s) in a.nodes.iter().enumerate() {
        let ws = &a.weights[(la, m)];
        if ws.is_zero() {
            continue;
        }
        for (n, t) in b.nodes.iter().enumerate() {
            let wt = &b.weights[(lb, n)];
            if !wt.is_zero() {
                nodes.push((s.clone(), t.clone()));
                weights.push(ws * wt);
            }
        }
    }
    DualFunctional { label, kind, nodes, weights }
}

/// One functional per basis function, in the same order.
pub fn build_dual_basis(smooth: &SmoothSpace) -> Result<Vec<DualFunctional>> {
    if smooth.kind != SingularityKind::A {
        return Err(Error::Unsupported("dual bases are only constructed for type A".into()));
    }
    let ls = spline_dual(&smooth.space.kv_s)?;
    let lt = spline_dual(&smooth.space.kv_t)?;
    let mu: Vec<Univariate> = (0..=smooth.order).map(bernstein_dual).collect::<Result<_>>()?;
    Ok(smooth
        .basis
        .iter()
        .map(|b| match b.label {
            BasisLabel::Smooth { i, j } => product(b.label, DualKind::SplineBernstein, &ls, i, &mu[i], j),
            BasisLabel::Standard { i, j } => product(b.label, DualKind::SplineSpline, &ls, i, &lt, j),
        })
        .collect())
}

/// `P[m][n] = λ_m(B_n)`; the identity for a dual basis.
pub fn pairing_matrix<T: Scalar>(smooth: &SmoothSpace, duals: &[DualFunctional]) -> Result<Vec<Vec<T>>> {
    let funcs: Vec<SplineCoefficients<T>> =
        (0..smooth.len()).map(|n| smooth.function(n).map(|f| f.map(T::from_rational))).collect::<Result<_>>()?;
    duals.iter().map(|d| funcs.iter().map(|f| d.apply(f)).collect()).collect()
}

/// Coefficients of `f` in the smooth basis, by applying the duals.
pub fn project<T: Scalar>(duals: &[DualFunctional], f: &SplineCoefficients<T>) -> Result<Vec<T>> {
    duals.iter().map(|d| d.apply(f)).collect()
}

/// `Σ_n c_n B_n` as a spline.
pub fn synthesize<T: Scalar>(smooth: &SmoothSpace, coeffs: &[T]) -> Result<SplineCoefficients<T>> {
    let mut flat = vec![T::zero(); smooth.space.dim()];
    for (b, c) in smooth.basis.iter().zip(coeffs) {
        for (o, x) in flat.iter_mut().zip(&b.coeffs) {
            if !x.is_zero() {
                *o = o.clone() + c.clone() * T::from_rational(x);
            }
        }
    }
    SplineCoefficients::from_flat(smooth.space.clone(), &flat)
}
