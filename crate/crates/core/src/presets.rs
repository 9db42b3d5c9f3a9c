//! Fixed configurations used by the examples, the CLI and the tests.

use crate::error::Result;
use crate::geometry::GeometryMap;
use crate::scalar::{rat, rat_int, Rational, Scalar};
use crate::spline::{KnotVector, TensorProductSpace};
use crate::triangular::{compose_into_space, reparam_a_polys, reparam_b_polys, TriangularPatchA, TriangularPatchB};

/// Interior knots `(1/4, 1/2, 3/4)` shared by all worked examples.
pub fn example_knots() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 2), rat(3, 4)]
}

/// `S = T` with the example knots at degree `p` in both directions.
pub fn uniform_space(p: usize) -> TensorProductSpace {
    let kv = KnotVector::open(p, &example_knots()).expect("example knots are valid");
    TensorProductSpace::new(kv.clone(), kv)
}

/// Bi-quadratic space of the first worked example.
pub fn example1_space() -> TensorProductSpace {
    uniform_space(2)
}

/// Bi-cubic space of the second worked example.
pub fn example2_space() -> TensorProductSpace {
    uniform_space(3)
}

/// Weight of the homogeneous control point `t_(1,1,0)` of the type-B patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcWeight {
    /// `(√2, √2, √2)` as tabulated; the arc is then a hyperbola branch.
    Stated,
    /// `(√2/2, √2/2, √2/2)`; the arc is an exact quarter circle.
    Circular,
}

impl ArcWeight {
    pub fn value(self) -> f64 {
        match self {
            ArcWeight::Stated => std::f64::consts::SQRT_2,
            ArcWeight::Circular => std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

/// Bi-quadratic homogeneous triangular patch over `Δ_B` bounded by two
/// segments on the axes and an arc from `(1, 0)` to `(0, 1)`.
pub fn example3_patch(weight: ArcWeight) -> TriangularPatchB<f64> {
    let w = weight.value();
    // (i, j) in multi_indices_b order: (0,0) (0,1) (0,2) (1,0) (1,1) (2,0).
    let points = vec![
        vec![1.0, 0.0, 0.0],
        vec![2.0, 0.0, 1.0],
        vec![1.0, 0.0, 1.0],
        vec![2.0, 1.0, 0.0],
        vec![w, w, w],
        vec![1.0, 1.0, 0.0],
    ];
    TriangularPatchB::new(2, points).expect("six homogeneous points")
}

/// `T ∘ u_B` in the bi-cubic example space.
pub fn example3_geometry(weight: ArcWeight) -> Result<GeometryMap<f64>> {
    let patch = example3_patch(weight);
    let polys: Vec<_> = (0..3).map(|d| patch.component_poly(d)).collect();
    GeometryMap::from_components(compose_into_space(&polys, &reparam_b_polys(), &example2_space())?)
}

/// Rational stand-in for `√2/2` so that type-A checks can run exactly.
pub fn quarter_disk_weight() -> Rational {
    rat(7, 10)
}

/// Bi-quadratic homogeneous triangular patch over `Δ_A` with the vertex
/// `u = 0` at the origin, straight edges along both axes and a conic arc of
/// middle weight `w` from `(1, 0)` to `(0, 1)`.
pub fn quarter_disk_triangle<T: Scalar>(w: T) -> TriangularPatchA<T> {
    let z = T::zero();
    let one = T::one();
    let half = T::from_ratio(1, 2);
    let entries = vec![
        ((2, 0, 0), vec![one.clone(), z.clone(), z.clone()]),
        ((1, 0, 1), vec![one.clone(), half.clone(), z.clone()]),
        ((1, 1, 0), vec![one.clone(), z.clone(), half]),
        ((0, 0, 2), vec![one.clone(), one.clone(), z.clone()]),
        ((0, 1, 1), vec![w.clone(), w.clone(), w]),
        ((0, 2, 0), vec![one.clone(), z, one]),
    ];
    TriangularPatchA::from_indexed(2, entries).expect("complete degree-2 patch")
}

/// `T ∘ u_A` for a homogeneous triangular patch in `space`.
pub fn type_a_geometry<T: Scalar>(patch: &TriangularPatchA<T>, space: &TensorProductSpace) -> Result<GeometryMap<T>> {
    let polys: Vec<_> = (0..3).map(|d| patch.component_poly(d)).collect();
    GeometryMap::from_components(compose_into_space(&polys, &reparam_a_polys(), space)?)
}

/// Exact type-A quarter-disk-style geometry with bidegree `(p, p)`.
pub fn quarter_disk_geometry(p: usize) -> Result<GeometryMap<Rational>> {
    type_a_geometry(&quarter_disk_triangle(quarter_disk_weight()), &uniform_space(p))
}

/// Bilinear map of the unit square scaled by `2`: regular everywhere.
pub fn square_geometry() -> Result<GeometryMap<Rational>> {
    use crate::poly::Poly2;
    use crate::spline::SplineCoefficients;
    let kv = KnotVector::bezier(1);
    let space = TensorProductSpace::new(kv.clone(), kv);
    let g0 = SplineCoefficients::constant(space.clone(), rat_int(1));
    let g1 = SplineCoefficients::from_polynomial(space.clone(), &Poly2::x().scale(&rat_int(2)))?;
    let g2 = SplineCoefficients::from_polynomial(space, &Poly2::y().scale(&rat_int(2)))?;
    GeometryMap::new(g0, g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SingularityType;

    #[test]
    fn classifications() {
        assert_eq!(quarter_disk_geometry(2).unwrap().classify_singularity().unwrap().kind, SingularityType::A);
        let b = example3_geometry(ArcWeight::Circular).unwrap().classify_singularity().unwrap();
        assert_eq!(b.kind, SingularityType::B);
        assert!(b.lambda.unwrap() > 0.0);
        assert_eq!(square_geometry().unwrap().classify_singularity().unwrap().kind, SingularityType::Regular);
    }

    #[test]
    fn circular_arc_has_unit_radius() {
        let g = example3_geometry(ArcWeight::Circular).unwrap();
        let stated = example3_geometry(ArcWeight::Stated).unwrap();
        let mut worst_stated: f64 = 0.0;
        // u = 0 is the edge s t = 0 with t - s = v, i.e. the two edges s = 0
        // and t = 0 of the parameter square.
        for k in 0..=16 {
            let h = k as f64 / 16.0;
            for (s, t) in [(0.0, h), (h, 0.0)] {
                let [x, y] = g.eval(&s, &t).unwrap();
                assert!((x.hypot(y) - 1.0).abs() < 1e-12, "({s}, {t}) -> {}", x.hypot(y));
                let [x, y] = stated.eval(&s, &t).unwrap();
                worst_stated = worst_stated.max((x.hypot(y) - 1.0).abs());
            }
        }
        assert!(worst_stated > 1e-2);
    }
}
