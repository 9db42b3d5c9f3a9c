//! JSON documents and plain-text tables.
//!
//! Numbers are written as exact `"num/den"` strings. On input, strings and
//! JSON numbers are both accepted; decimals are read exactly.

use std::fmt;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, RationalMatrix};
use crate::scalar::{format_rational, parse_rational, rational_from_f64, rational_to_f64, Rational, Scalar};
use crate::singular_basis::{BasisLabel, SingularityKind, SmoothBasisFunction, SmoothSpace};
use crate::spline::{KnotVector, SplineCoefficients, TensorProductSpace};
use crate::triangular::{multi_indices_a, multi_indices_b, TriangularPatchA, TriangularPatchB};

/// A number as written in a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub String);

impl Num {
    pub fn exact(r: &Rational) -> Self {
        Num(format_rational(r))
    }

    /// Shortest decimal that reads back to the same `f64`.
    pub fn float(x: f64) -> Self {
        Num(format!("{x:?}"))
    }

    pub fn to_rational(&self) -> Result<Rational> {
        parse_rational(&self.0)
    }

    pub fn to_f64(&self) -> Result<f64> {
        let s = self.0.trim();
        if s.contains('/') {
            return Ok(rational_to_f64(&parse_rational(s)?));
        }
        s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::InvalidNumber(self.0.clone()))
    }

    pub fn to_scalar<T: Scalar>(&self) -> Result<T> {
        if T::EXACT {
            Ok(T::from_rational(&self.to_rational()?))
        } else {
            Ok(T::from_rational(&rational_from_f64(self.to_f64()?)?))
        }
    }

    pub fn from_scalar<T: Scalar>(x: &T) -> Result<Self> {
        if T::EXACT {
            Ok(Num::exact(&x.to_rational()?))
        } else {
            Ok(Num::float(x.to_f64()))
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a \"num/den\" string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                parse_rational(v).map_err(|_| E::custom(format!("invalid number `{v}`")))?;
                Ok(Num(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                if !v.is_finite() {
                    return Err(E::custom("non-finite number"));
                }
                Ok(Num::float(v))
            }
        }
        d.deserialize_any(V)
    }
}

/// Parses JSON, reporting syntax and shape errors with line and column.
pub fn from_json_str<D: DeserializeOwned>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Json { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn nums_exact(v: &[Rational]) -> Vec<Num> {
    v.iter().map(Num::exact).collect()
}

fn parse_nums(v: &[Num]) -> Result<Vec<Rational>> {
    v.iter().map(Num::to_rational).collect()
}

fn grid<T: Scalar>(m: &Matrix<T>) -> Result<Vec<Vec<Num>>> {
    m.row_iter().map(|r| r.iter().map(Num::from_scalar).collect()).collect()
}

fn read_grid<T: Scalar>(rows: &[Vec<Num>], shape: (usize, usize)) -> Result<Matrix<T>> {
    let found = (rows.len(), rows.first().map_or(0, Vec::len));
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::ShapeMismatch { expected: shape, found });
    }
    let data = rows.iter().flatten().map(Num::to_scalar).collect::<Result<Vec<T>>>()?;
    Matrix::from_vec(shape.0, shape.1, data)
}

/// Full knot vectors of a tensor-product space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub degree_s: usize,
    pub degree_t: usize,
    pub knots_s: Vec<Num>,
    pub knots_t: Vec<Num>,
}

impl SpaceDocument {
    pub fn from_space(space: &TensorProductSpace) -> Self {
        Self {
            degree_s: space.kv_s.degree(),
            degree_t: space.kv_t.degree(),
            knots_s: nums_exact(space.kv_s.knots()),
            knots_t: nums_exact(space.kv_t.knots()),
        }
    }

    pub fn to_space(&self) -> Result<TensorProductSpace> {
        Ok(TensorProductSpace::new(
            KnotVector::new(self.degree_s, parse_nums(&self.knots_s)?)?,
            KnotVector::new(self.degree_t, parse_nums(&self.knots_t)?)?,
        ))
    }
}

/// `{"degree_s", "degree_t", "knots_s", "knots_t", "coeffs"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplineDocument {
    pub degree_s: usize,
    pub degree_t: usize,
    pub knots_s: Vec<Num>,
    pub knots_t: Vec<Num>,
    pub coeffs: Vec<Vec<Num>>,
}

impl SplineDocument {
    pub fn from_spline<T: Scalar>(f: &SplineCoefficients<T>) -> Result<Self> {
        let sp = SpaceDocument::from_space(f.space());
        Ok(Self {
            degree_s: sp.degree_s,
            degree_t: sp.degree_t,
            knots_s: sp.knots_s,
            knots_t: sp.knots_t,
            coeffs: grid(f.coeffs())?,
        })
    }

    fn space_document(&self) -> SpaceDocument {
        SpaceDocument {
            degree_s: self.degree_s,
            degree_t: self.degree_t,
            knots_s: self.knots_s.clone(),
            knots_t: self.knots_t.clone(),
        }
    }

    pub fn to_spline<T: Scalar>(&self) -> Result<SplineCoefficients<T>> {
        let space = self.space_document().to_space()?;
        let m = read_grid(&self.coeffs, space.shape())?;
        SplineCoefficients::new(space, m)
    }
}

/// Homogeneous geometry `(g0, g1, g2)` over one space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDocument {
    pub degree_s: usize,
    pub degree_t: usize,
    pub knots_s: Vec<Num>,
    pub knots_t: Vec<Num>,
    pub g0: Vec<Vec<Num>>,
    pub g1: Vec<Vec<Num>>,
    pub g2: Vec<Vec<Num>>,
}

impl GeometryDocument {
    pub fn from_geometry<T: Scalar>(g: &crate::geometry::GeometryMap<T>) -> Result<Self> {
        let sp = SpaceDocument::from_space(g.g0.space());
        Ok(Self {
            degree_s: sp.degree_s,
            degree_t: sp.degree_t,
            knots_s: sp.knots_s,
            knots_t: sp.knots_t,
            g0: grid(g.g0.coeffs())?,
            g1: grid(g.g1.coeffs())?,
            g2: grid(g.g2.coeffs())?,
        })
    }

    pub fn to_geometry<T: Scalar>(&self) -> Result<crate::geometry::GeometryMap<T>> {
        let space = SpaceDocument {
            degree_s: self.degree_s,
            degree_t: self.degree_t,
            knots_s: self.knots_s.clone(),
            knots_t: self.knots_t.clone(),
        }
        .to_space()?;
        let parts = [&self.g0, &self.g1, &self.g2]
            .iter()
            .map(|rows| SplineCoefficients::new(space.clone(), read_grid(rows, space.shape())?))
            .collect::<Result<Vec<_>>>()?;
        crate::geometry::GeometryMap::from_components(parts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrianglePoint {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coords: Vec<Num>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    A,
    B,
}

impl From<KindTag> for SingularityKind {
    fn from(k: KindTag) -> Self {
        match k {
            KindTag::A => SingularityKind::A,
            KindTag::B => SingularityKind::B,
        }
    }
}

impl From<SingularityKind> for KindTag {
    fn from(k: SingularityKind) -> Self {
        match k {
            SingularityKind::A => KindTag::A,
            SingularityKind::B => KindTag::B,
        }
    }
}

fn default_kind() -> KindTag {
    KindTag::A
}

/// `{"degree": p, "kind": "a" | "b", "points": [{"i", "j", "k", "coords"}]}`.
/// For type B, `k = degree - i - j` is the exponent of `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrianglePatchDocument {
    pub degree: usize,
    #[serde(default = "default_kind")]
    pub kind: KindTag,
    pub points: Vec<TrianglePoint>,
}

impl TrianglePatchDocument {
    pub fn from_patch_a<T: Scalar>(patch: &TriangularPatchA<T>) -> Result<Self> {
        let points = multi_indices_a(patch.degree())
            .into_iter()
            .zip(patch.points())
            .map(|((i, j, k), c)| Ok(TrianglePoint { i, j, k, coords: c.iter().map(Num::from_scalar).collect::<Result<_>>()? }))
            .collect::<Result<_>>()?;
        Ok(Self { degree: patch.degree(), kind: KindTag::A, points })
    }

    pub fn from_patch_b<T: Scalar>(patch: &TriangularPatchB<T>) -> Result<Self> {
        let p = patch.degree();
        let points = multi_indices_b(p)
            .into_iter()
            .zip(patch.points())
            .map(|((i, j), c)| {
                Ok(TrianglePoint { i, j, k: p - i - j, coords: c.iter().map(Num::from_scalar).collect::<Result<_>>()? })
            })
            .collect::<Result<_>>()?;
        Ok(Self { degree: p, kind: KindTag::B, points })
    }

    fn entries<T: Scalar>(&self) -> Result<Vec<((usize, usize, usize), Vec<T>)>> {
        // Checked so that absurd degrees fail before anything is allocated.
        let expected = self.degree.checked_add(1).and_then(|a| a.checked_mul(self.degree.checked_add(2)?)).map(|n| n / 2);
        if expected != Some(self.points.len()) {
            return Err(Error::IncompletePatch {
                degree: self.degree,
                expected: expected.unwrap_or(usize::MAX),
                found: self.points.len(),
            });
        }
        self.points
            .iter()
            .map(|pt| {
                if pt.i.checked_add(pt.j).and_then(|x| x.checked_add(pt.k)) != Some(self.degree) {
                    return Err(Error::InvalidMultiIndex { index: (pt.i, pt.j, pt.k), degree: self.degree });
                }
                Ok(((pt.i, pt.j, pt.k), pt.coords.iter().map(Num::to_scalar).collect::<Result<_>>()?))
            })
            .collect()
    }

    pub fn to_patch_a<T: Scalar>(&self) -> Result<TriangularPatchA<T>> {
        if self.kind != KindTag::A {
            return Err(Error::Format("expected a type-A patch".into()));
        }
        TriangularPatchA::from_indexed(self.degree, self.entries()?)
    }

    pub fn to_patch_b<T: Scalar>(&self) -> Result<TriangularPatchB<T>> {
        if self.kind != KindTag::B {
            return Err(Error::Format("expected a type-B patch".into()));
        }
        let entries = self.entries()?;
        let order = multi_indices_b(self.degree);
        let mut slots: Vec<Option<Vec<T>>> = vec![None; order.len()];
        for ((i, j, _), c) in entries {
            let pos = order.iter().position(|&x| x == (i, j)).expect("index validated above");
            if slots[pos].replace(c).is_some() {
                return Err(Error::Format(format!("duplicate control point ({i}, {j})")));
            }
        }
        let found = slots.iter().filter(|s| s.is_some()).count();
        let points: Option<Vec<Vec<T>>> = slots.into_iter().collect();
        let points = points.ok_or(Error::IncompletePatch { degree: self.degree, expected: order.len(), found })?;
        TriangularPatchB::new(self.degree, points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelTag {
    Smooth,
    Standard,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub label: LabelTag,
    pub i: usize,
    pub j: usize,
    /// Coefficients over the standard basis, one row per `B^p_i[S]`.
    pub coeffs: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothSpaceDocument {
    pub kind: KindTag,
    pub order: usize,
    pub degree_s: usize,
    pub degree_t: usize,
    pub knots_s: Vec<Num>,
    pub knots_t: Vec<Num>,
    pub dimension: usize,
    pub basis: Vec<BasisEntry>,
}

impl SmoothSpaceDocument {
    pub fn from_smooth_space(sm: &SmoothSpace) -> Self {
        let sp = SpaceDocument::from_space(&sm.space);
        let nt = sm.space.shape().1;
        let basis = sm
            .basis
            .iter()
            .map(|b| {
                let (label, (i, j)) = match b.label {
                    BasisLabel::Smooth { i, j } => (LabelTag::Smooth, (i, j)),
                    BasisLabel::Standard { i, j } => (LabelTag::Standard, (i, j)),
                };
                BasisEntry { label, i, j, coeffs: b.coeffs.chunks(nt).map(nums_exact).collect() }
            })
            .collect();
        Self {
            kind: sm.kind.into(),
            order: sm.order,
            degree_s: sp.degree_s,
            degree_t: sp.degree_t,
            knots_s: sp.knots_s,
            knots_t: sp.knots_t,
            dimension: sm.len(),
            basis,
        }
    }

    pub fn to_smooth_space(&self) -> Result<SmoothSpace> {
        let space = SpaceDocument {
            degree_s: self.degree_s,
            degree_t: self.degree_t,
            knots_s: self.knots_s.clone(),
            knots_t: self.knots_t.clone(),
        }
        .to_space()?;
        if self.dimension != self.basis.len() {
            return Err(Error::Format(format!(
                "dimension {} does not match {} basis entries",
                self.dimension,
                self.basis.len()
            )));
        }
        let basis = self
            .basis
            .iter()
            .map(|e| {
                let m: RationalMatrix = read_grid(&e.coeffs, space.shape())?;
                let label = match e.label {
                    LabelTag::Smooth => BasisLabel::Smooth { i: e.i, j: e.j },
                    LabelTag::Standard => BasisLabel::Standard { i: e.i, j: e.j },
                };
                Ok(SmoothBasisFunction { label, coeffs: m.as_slice().to_vec() })
            })
            .collect::<Result<_>>()?;
        Ok(SmoothSpace { space, order: self.order, kind: self.kind.into(), basis })
    }
}

/// Matrix as a JSON array of rows of `"num/den"` strings.
pub fn matrix_json(m: &RationalMatrix) -> Vec<Vec<Num>> {
    m.row_iter().map(nums_exact).collect()
}

pub fn matrix_from_json(rows: &[Vec<Num>]) -> Result<RationalMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    read_grid(rows, (rows.len(), cols))
}

/// Right-aligned fraction table under a title line.
pub fn fraction_table(title: &str, m: &RationalMatrix) -> String {
    format!("{title}\n{}\n", m.to_string().trim_end_matches('\n'))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn numbers_round_trip() {
        let r = rat(-13, 32);
        assert_eq!(Num::exact(&r).to_rational().unwrap(), r);
        assert_eq!(Num::from_scalar(&r).unwrap().0, "-13/32");
        let x = std::f64::consts::SQRT_2;
        assert_eq!(Num::float(x).to_f64().unwrap(), x);
        assert_eq!(Num("0.1".into()).to_rational().unwrap(), rat(1, 10));
    }

    #[test]
    fn json_errors_have_positions() {
        let err = from_json_str::<SplineDocument>("{\n  \"degree_s\": 2,\n  oops\n}").unwrap_err();
        assert!(matches!(err, Error::Json { line: 3, .. }), "{err:?}");
        let err = from_json_str::<Vec<Num>>("[\"1/0\"]").unwrap_err();
        assert!(matches!(err, Error::Json { line: 1, .. }));
    }

    #[test]
    fn spline_document_round_trip() {
        let space = crate::presets::example1_space();
        let f = SplineCoefficients::unit(space, 2, 3).unwrap().scale(&rat(3, 7));
        let doc = SplineDocument::from_spline(&f).unwrap();
        let text = to_json_string(&doc).unwrap();
        let back: SplineDocument = from_json_str(&text).unwrap();
        assert_eq!(back.to_spline::<Rational>().unwrap(), f);
    }

    #[test]
    fn shape_mismatch_reports_both_shapes() {
        let space = crate::presets::example1_space();
        let mut doc = SplineDocument::from_spline(&SplineCoefficients::<Rational>::zeros(space)).unwrap();
        doc.coeffs.pop();
        assert!(matches!(
            doc.to_spline::<Rational>(),
            Err(Error::ShapeMismatch { expected: (6, 6), found: (5, 6) })
        ));
    }
}
