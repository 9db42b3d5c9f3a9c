//! Smooth subspaces of a tensor-product spline space at a singular
//! parameterization.
//!
//! Type A (edge `s = 0` collapsed through `u_A`): the first `k + 1` tensor
//! rows are replaced by `B^p_i(s) b^i_j(t)`, `j <= i <= k`.
//!
//! Type B (corner `(0, 0)` with antiparallel partials, reached through
//! `u_B`): the `(k + 1)^2` corner functions are replaced by `B̃_(i,j)`,
//! `i + j <= k`, whose corner jets match `β^k_(i,j) ∘ u_B`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::poly::Poly2;
use crate::scalar::{factorial, rational_to_f64, Rational};
use crate::spline::{SplineCoefficients, TensorProductSpace};
use crate::transform::combined_row_coefficients;
use crate::triangular::{multi_indices_b, reparam_b_polys, tri_bernstein_b_poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// `B̃_(i,j)`.
    Smooth { i: usize, j: usize },
    /// `B^p_i(s) B^q_j(t)`.
    Standard { i: usize, j: usize },
}

impl BasisLabel {
    pub fn is_smooth(&self) -> bool {
        matches!(self, BasisLabel::Smooth { .. })
    }

    pub fn indices(&self) -> (usize, usize) {
        match *self {
            BasisLabel::Smooth { i, j } | BasisLabel::Standard { i, j } => (i, j),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothBasisFunction {
    pub label: BasisLabel,
    /// Coefficients over the standard basis, row-major in `(i, j)`.
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothSpace {
    pub space: TensorProductSpace,
    pub order: usize,
    pub kind: SingularityKind,
    pub basis: Vec<SmoothBasisFunction>,
}

/// Knobs for the constructions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Reject interior knots of multiplicity above `min(p, q) - k`.
    pub strict_multiplicity: bool,
}

impl SmoothSpace {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn smooth_count(&self) -> usize {
        self.basis.iter().filter(|b| b.label.is_smooth()).count()
    }

    pub fn standard_count(&self) -> usize {
        self.len() - self.smooth_count()
    }

    /// One row per basis function.
    pub fn coefficient_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(self.basis.iter().map(|b| b.coeffs.clone()).collect()).expect("rows share the space")
    }

    pub fn function(&self, n: usize) -> Result<SplineCoefficients<Rational>> {
        let b = self.basis.get(n).ok_or(Error::IndexOutOfRange { index: n, max: self.len().saturating_sub(1) })?;
        SplineCoefficients::from_flat(self.space.clone(), &b.coeffs)
    }

    pub fn position(&self, label: BasisLabel) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Rank of the coefficient matrix; equals `len()` for a basis.
    pub fn rank(&self) -> usize {
        self.coefficient_matrix().rank()
    }

    /// Sum of all basis functions' coefficients.
    pub fn coefficient_sum(&self) -> Vec<Rational> {
        self.coefficient_matrix().column_sums()
    }

    /// Expected size from the closed-form count.
    pub fn expected_len(&self) -> usize {
        expected_dimension(&self.space, self.order, self.kind)
    }
}

/// `|𝕊^k|` from the counting formulas.
pub fn expected_dimension(space: &TensorProductSpace, k: usize, kind: SingularityKind) -> usize {
    let (ns, nt) = space.shape();
    let smooth = (k + 1) * (k + 2) / 2;
    match kind {
        SingularityKind::A => smooth + ns.saturating_sub(k + 1) * nt,
        SingularityKind::B => smooth + ns * nt - (k + 1) * (k + 1),
    }
}

fn check_order(space: &TensorProductSpace, k: usize, opts: BuildOptions) -> Result<()> {
    let (p, q) = space.degrees();
    let max = p.min(q);
    if k > max {
        return Err(Error::OrderTooLarge { order: k, max });
    }
    if opts.strict_multiplicity {
        let allowed = max - k;
        for kv in [&space.kv_s, &space.kv_t] {
            if let Some((knot, m)) = kv.interior_breaks().into_iter().find(|(_, m)| *m > allowed) {
                return Err(Error::SmoothnessViolatingMultiplicity {
                    knot: rational_to_f64(&knot),
                    multiplicity: m,
                    order: k,
                    allowed,
                });
            }
        }
    }
    Ok(())
}

fn standard(space: &TensorProductSpace, i: usize, j: usize) -> SmoothBasisFunction {
    let mut coeffs = vec![Rational::zero(); space.dim()];
    coeffs[space.flat(i, j)] = Rational::one();
    SmoothBasisFunction { label: BasisLabel::Standard { i, j }, coeffs }
}

pub fn build_smooth_space_a(space: &TensorProductSpace, k: usize) -> Result<SmoothSpace> {
    build_smooth_space_a_with(space, k, BuildOptions::default())
}

pub fn build_smooth_space_a_with(space: &TensorProductSpace, k: usize, opts: BuildOptions) -> Result<SmoothSpace> {
    check_order(space, k, opts)?;
    let (_, q) = space.degrees();
    let (ns, nt) = space.shape();
    let mut basis = Vec::with_capacity(expected_dimension(space, k, SingularityKind::A));
    for i in 0..=k {
        let rows = combined_row_coefficients(i, k, q, &space.kv_t)?;
        for j in 0..=i {
            let mut coeffs = vec![Rational::zero(); space.dim()];
            coeffs[space.flat(i, 0)..space.flat(i, 0) + nt].clone_from_slice(rows.row(j));
            basis.push(SmoothBasisFunction { label: BasisLabel::Smooth { i, j }, coeffs });
        }
    }
    for i in k + 1..ns {
        for j in 0..nt {
            basis.push(standard(space, i, j));
        }
    }
    Ok(SmoothSpace { space: space.clone(), order: k, kind: SingularityKind::A, basis })
}

/// Outcome of a membership test. `witness` is the polynomial `ϱ(u, v)` of
/// total degree `<= k` whose composition with the reparameterization has the
/// same jet as `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<Poly2<Rational>>,
    /// First derivative order in `s` (type A) at which no polynomial fits.
    pub failed_order: Option<usize>,
}

/// `ℓ`-th derivative of every `B^p_i` at `0`, divided by `ℓ!`: `out[ℓ][i]`.
fn taylor_at_zero(kv: &crate::spline::KnotVector, order: usize) -> Vec<Vec<Rational>> {
    let mono = kv.first_span_monomials::<Rational>();
    (0..=order).map(|l| mono.iter().map(|m| m.get(l).cloned().unwrap_or_else(Rational::zero)).collect()).collect()
}

/// Tests membership in `𝒮^k(u_A, {0} × [0, 1])`.
///
/// The `m`-th Taylor coefficient in `s` at `s = 0` is a spline in `t`; the
/// condition holds iff it is a polynomial of degree `<= m` for every
/// `m <= k`. Its monomial coefficients then give `ϱ`.
pub fn check_membership_a(f: &SplineCoefficients<Rational>, k: usize) -> Result<Membership> {
    let kv_t = &f.space().kv_t;
    let q = kv_t.degree();
    let mut witness = Poly2::zero();
    for (m, g) in s_taylor_rows(f, k).iter().enumerate() {
        match fit_polynomial(kv_t, g, m.min(q))? {
            Some(coeffs) => {
                for (b, c) in coeffs.into_iter().enumerate() {
                    if !c.is_zero() {
                        witness.set_coeff(m - b, b, c);
                    }
                }
            }
            None => return Ok(Membership { member: false, witness: None, failed_order: Some(m) }),
        }
    }
    Ok(Membership { member: true, witness: Some(witness), failed_order: None })
}

/// `out[m]` holds the B-spline coefficients in `t` of the `m`-th Taylor
/// coefficient of `f` in `s` at `s = 0`, for `m <= k`.
pub fn s_taylor_rows(f: &SplineCoefficients<Rational>, k: usize) -> Vec<Vec<Rational>> {
    let space = f.space();
    let (ns, nt) = space.shape();
    let ts = taylor_at_zero(&space.kv_s, k.min(space.kv_s.degree()));
    (0..=k)
        .map(|m| {
            let mut g = vec![Rational::zero(); nt];
            if let Some(row) = ts.get(m) {
                for (i, w) in row.iter().enumerate().take(ns) {
                    if w.is_zero() {
                        continue;
                    }
                    for (gj, c) in g.iter_mut().zip(f.coeffs().row(i)) {
                        *gj += w * c;
                    }
                }
            }
            g
        })
        .collect()
}

/// Monomial coefficients `a_0..a_deg` with `Σ a_b t^b` equal to the spline
/// with coefficients `g`, or `None` when no such polynomial exists.
fn fit_polynomial(kv: &crate::spline::KnotVector, g: &[Rational], deg: usize) -> Result<Option<Vec<Rational>>> {
    let cols: Vec<Vec<Rational>> = (0..=deg).map(|b| kv.monomial_coefficients(b)).collect::<Result<_>>()?;
    let n = g.len();
    let mut aug = RationalMatrix::zeros(n, deg + 2);
    for r in 0..n {
        for (b, col) in cols.iter().enumerate() {
            aug[(r, b)] = col[r].clone();
        }
        aug[(r, deg + 1)] = g[r].clone();
    }
    let (red, pivots) = aug.rref();
    if pivots.contains(&(deg + 1)) {
        return Ok(None);
    }
    let mut out = vec![Rational::zero(); deg + 1];
    for (row, &pc) in pivots.iter().enumerate() {
        out[pc] = red[(row, deg + 1)].clone();
    }
    Ok(Some(out))
}

/// Grid of corner partials `out[a][b] = ∂^{a+b} f / ∂s^a ∂t^b (0, 0)`
/// for `a, b <= k`, exact.
pub fn corner_jet_grid(f: &SplineCoefficients<Rational>, k: usize) -> Vec<Vec<Rational>> {
    let space = f.space();
    let ts = taylor_at_zero(&space.kv_s, k);
    let tt = taylor_at_zero(&space.kv_t, k);
    let fa = |a: usize| factorial::<Rational>(a);
    let mut out = vec![vec![Rational::zero(); k + 1]; k + 1];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let mut acc = Rational::zero();
            for (i, wi) in ts[a].iter().enumerate() {
                if wi.is_zero() {
                    continue;
                }
                for (j, wj) in tt[b].iter().enumerate() {
                    if !wj.is_zero() {
                        acc += wi * wj * &f.coeffs()[(i, j)];
                    }
                }
            }
            *v = acc * fa(a) * fa(b);
        }
    }
    out
}

/// Same grid for a polynomial in `(s, t)`.
pub fn poly_jet_grid(p: &Poly2<Rational>, k: usize) -> Vec<Vec<Rational>> {
    (0..=k).map(|a| (0..=k).map(|b| p.derivative_at_origin(a, b)).collect()).collect()
}

/// The `(k+1)^2 × (k+1)^2` corner-matching matrix: row `(α1, α2)`, column
/// `(ℓ1, ℓ2)`, entry `B_ℓ1^(α1)(0) B_ℓ2^(α2)(0)`.
pub fn corner_system(space: &TensorProductSpace, k: usize) -> RationalMatrix {
    let ts = taylor_at_zero(&space.kv_s, k);
    let tt = taylor_at_zero(&space.kv_t, k);
    let n = (k + 1) * (k + 1);
    let mut m = RationalMatrix::zeros(n, n);
    for a1 in 0..=k {
        for a2 in 0..=k {
            for l1 in 0..=k {
                for l2 in 0..=k {
                    m[(a1 * (k + 1) + a2, l1 * (k + 1) + l2)] =
                        &ts[a1][l1] * &tt[a2][l2] * factorial::<Rational>(a1) * factorial::<Rational>(a2);
                }
            }
        }
    }
    m
}

/// `β^k_(i,j) ∘ u_B` as a polynomial in `(s, t)`.
pub fn composed_bernstein_b(k: usize, idx: (usize, usize)) -> Result<Poly2<Rational>> {
    let (u, v) = reparam_b_polys::<Rational>();
    Ok(tri_bernstein_b_poly::<Rational>(k, idx)?.compose(&u, &v))
}

pub fn build_smooth_space_b(space: &TensorProductSpace, k: usize) -> Result<SmoothSpace> {
    build_smooth_space_b_with(space, k, BuildOptions::default())
}

pub fn build_smooth_space_b_with(space: &TensorProductSpace, k: usize, opts: BuildOptions) -> Result<SmoothSpace> {
    check_order(space, k, opts)?;
    let (ns, nt) = space.shape();
    let system = corner_system(space, k);
    let n = (k + 1) * (k + 1);
    let mut basis = Vec::with_capacity(expected_dimension(space, k, SingularityKind::B));
    for (i, j) in multi_indices_b(k) {
        let target = poly_jet_grid(&composed_bernstein_b(k, (i, j))?, k);
        let rhs = RationalMatrix::from_vec(n, 1, target.into_iter().flatten().collect())?;
        let sol = system.solve(&rhs)?;
        let mut coeffs = vec![Rational::zero(); space.dim()];
        for l1 in 0..=k {
            for l2 in 0..=k {
                coeffs[space.flat(l1, l2)] = sol[(l1 * (k + 1) + l2, 0)].clone();
            }
        }
        basis.push(SmoothBasisFunction { label: BasisLabel::Smooth { i, j }, coeffs });
    }
    for i in 0..ns {
        for j in 0..nt {
            if i.max(j) > k {
                basis.push(standard(space, i, j));
            }
        }
    }
    Ok(SmoothSpace { space: space.clone(), order: k, kind: SingularityKind::B, basis })
}

/// Tests membership in `𝒮^k(u_B, {(0, 0)})`: some `ϱ ∈ P_k` with the same
/// `(k+1)^2` corner partials as `f`.
pub fn check_membership_b(f: &SplineCoefficients<Rational>, k: usize) -> Result<Membership> {
    let grid = corner_jet_grid(f, k);
    let (u, v) = reparam_b_polys::<Rational>();
    let monos: Vec<(usize, usize)> = (0..=k).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect();
    let cols: Vec<Vec<Vec<Rational>>> = monos
        .iter()
        .map(|&(a, b)| poly_jet_grid(&u.powi(a).mul(&v.powi(b)), k))
        .collect();
    let n = (k + 1) * (k + 1);
    let mut aug = RationalMatrix::zeros(n, monos.len() + 1);
    for a1 in 0..=k {
        for a2 in 0..=k {
            let r = a1 * (k + 1) + a2;
            for (c, col) in cols.iter().enumerate() {
                aug[(r, c)] = col[a1][a2].clone();
            }
            aug[(r, monos.len())] = grid[a1][a2].clone();
        }
    }
    let (red, pivots) = aug.rref();
    if pivots.contains(&monos.len()) {
        return Ok(Membership { member: false, witness: None, failed_order: None });
    }
    let mut witness = Poly2::zero();
    for (row, &pc) in pivots.iter().enumerate() {
        let (a, b) = monos[pc];
        witness.set_coeff(a, b, red[(row, monos.len())].clone());
    }
    Ok(Membership { member: true, witness: Some(witness), failed_order: None })
}

pub fn check_membership(f: &SplineCoefficients<Rational>, k: usize, kind: SingularityKind) -> Result<Membership> {
    match kind {
        SingularityKind::A => check_membership_a(f, k),
        SingularityKind::B => check_membership_b(f, k),
    }
}

/// Linear constraints cutting `𝒮^k` out of `𝒮`: `f ∈ 𝒮^k` iff
/// `C · coeffs = 0`. The rows of `C` span the orthogonal complement of the
/// basis coefficient rows.
pub fn constraint_matrix(smooth: &SmoothSpace) -> RationalMatrix {
    smooth.coefficient_matrix().nullspace()
}
