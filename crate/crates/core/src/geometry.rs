//! Rational geometry maps `G = (g1/g0, g2/g0)` and isogeometric functions
//! `φ = (f/g0) ∘ G^{-1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet;
use crate::poly::Poly2;
use crate::scalar::Scalar;
use crate::spline::SplineCoefficients;

/// Side length of the weight-positivity check grid.
const WEIGHT_GRID: usize = 17;
/// Side length of the Newton seed grid.
const SEED_GRID: usize = 32;
const NEWTON_MAX_ITER: usize = 60;
const NEWTON_STEP_TOL: f64 = 1e-12;
const MIN_ABS_DET: f64 = 1e-10;
/// Antiparallel partials must be within this angle of `π`.
const ANTIPARALLEL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryMap<T> {
    pub g0: SplineCoefficients<T>,
    pub g1: SplineCoefficients<T>,
    pub g2: SplineCoefficients<T>,
    /// `(s, t, x, y)` on a grid of cell centers.
    seeds: Vec<[f64; 4]>,
}

fn grid_point(n: usize, i: usize) -> f64 {
    i as f64 / (n - 1) as f64
}

impl<T: Scalar> GeometryMap<T> {
    pub fn new(g0: SplineCoefficients<T>, g1: SplineCoefficients<T>, g2: SplineCoefficients<T>) -> Result<Self> {
        for g in [&g1, &g2] {
            if g.space() != g0.space() {
                return Err(Error::ShapeMismatch { expected: g0.space().shape(), found: g.space().shape() });
            }
        }
        let mut geo = Self { g0, g1, g2, seeds: Vec::new() };
        for i in 0..WEIGHT_GRID {
            for j in 0..WEIGHT_GRID {
                let (s, t) = (grid_point(WEIGHT_GRID, i), grid_point(WEIGHT_GRID, j));
                geo.weight(&T::from_rational(&crate::scalar::rational_from_f64(s)?), &T::from_rational(&crate::scalar::rational_from_f64(t)?))?;
            }
        }
        let f = geo.to_f64_parts();
        for i in 0..SEED_GRID {
            for j in 0..SEED_GRID {
                let s = (i as f64 + 0.5) / SEED_GRID as f64;
                let t = (j as f64 + 0.5) / SEED_GRID as f64;
                let [x, y] = eval_parts(&f, s, t)?;
                geo.seeds.push([s, t, x, y]);
            }
        }
        Ok(geo)
    }

    /// Builds from homogeneous components `[g0, g1, g2]`.
    pub fn from_components(mut parts: Vec<SplineCoefficients<T>>) -> Result<Self> {
        if parts.len() < 3 {
            return Err(Error::Format(format!("geometry needs 3 homogeneous components, found {}", parts.len())));
        }
        let g2 = parts.remove(2);
        let g1 = parts.remove(1);
        let g0 = parts.remove(0);
        Self::new(g0, g1, g2)
    }

    fn to_f64_parts(&self) -> [SplineCoefficients<f64>; 3] {
        [self.g0.to_f64(), self.g1.to_f64(), self.g2.to_f64()]
    }

    pub fn to_f64(&self) -> GeometryMap<f64> {
        let [g0, g1, g2] = self.to_f64_parts();
        GeometryMap { g0, g1, g2, seeds: self.seeds.clone() }
    }

    pub fn degrees(&self) -> (usize, usize) {
        self.g0.space().degrees()
    }

    fn weight(&self, s: &T, t: &T) -> Result<T> {
        let w = self.g0.eval(s, t)?;
        if w <= T::zero() {
            return Err(Error::NonPositiveWeight { s: s.to_f64(), t: t.to_f64(), value: w.to_f64() });
        }
        Ok(w)
    }

    /// `(g0, g1, g2)(s, t)`.
    pub fn homogeneous(&self, s: &T, t: &T) -> Result<[T; 3]> {
        Ok([self.g0.eval(s, t)?, self.g1.eval(s, t)?, self.g2.eval(s, t)?])
    }

    pub fn eval(&self, s: &T, t: &T) -> Result<[T; 2]> {
        let w = self.weight(s, t)?;
        Ok([self.g1.eval(s, t)? / w.clone(), self.g2.eval(s, t)? / w])
    }

    /// `[[∂x/∂s, ∂x/∂t], [∂y/∂s, ∂y/∂t]]` by the quotient rule.
    pub fn jacobian(&self, s: &T, t: &T) -> Result<[[T; 2]; 2]> {
        let w = self.weight(s, t)?;
        let p0 = self.g0.partials(s, t, 1)?;
        let mut out: [[T; 2]; 2] = [[T::zero(), T::zero()], [T::zero(), T::zero()]];
        for (row, g) in out.iter_mut().zip([&self.g1, &self.g2]) {
            let p = g.partials(s, t, 1)?;
            let w2 = w.clone() * w.clone();
            row[0] = (p[1][0].clone() * w.clone() - p[0][0].clone() * p0[1][0].clone()) / w2.clone();
            row[1] = (p[0][1].clone() * w.clone() - p[0][0].clone() * p0[0][1].clone()) / w2;
        }
        Ok(out)
    }

    pub fn det_jacobian(&self, s: &T, t: &T) -> Result<T> {
        let j = self.jacobian(s, t)?;
        Ok(j[0][0].clone() * j[1][1].clone() - j[0][1].clone() * j[1][0].clone())
    }

    /// Jets of `g0` and of `G - G(s, t)` in parameter offsets, truncated at
    /// `order`.
    fn jets(&self, s: &T, t: &T, order: usize) -> Result<(Poly2<T>, Poly2<T>, Poly2<T>)> {
        self.weight(s, t)?;
        let j0 = jet::from_partials(&self.g0.partials(s, t, order)?, order);
        let mut x = jet::div(&jet::from_partials(&self.g1.partials(s, t, order)?, order), &j0, order)?;
        let mut y = jet::div(&jet::from_partials(&self.g2.partials(s, t, order)?, order), &j0, order)?;
        x.set_coeff(0, 0, T::zero());
        y.set_coeff(0, 0, T::zero());
        Ok((j0, x, y))
    }

    pub fn offset_jets(&self, s: &T, t: &T, order: usize) -> Result<(Poly2<T>, Poly2<T>)> {
        let (_, x, y) = self.jets(s, t, order)?;
        Ok((x, y))
    }

    /// Physical partials `out[n][a][b]` of `(fs[n] / g0) ∘ G^{-1}` at the
    /// image of `(s, t)`, sharing one jet system across all `fs`.
    pub fn physical_partials_many(
        &self,
        fs: &[SplineCoefficients<T>],
        s: &T,
        t: &T,
        order: usize,
    ) -> Result<Vec<Vec<Vec<T>>>> {
        let (j0, x, y) = self.jets(s, t, order)?;
        let phis = fs
            .iter()
            .map(|f| jet::div(&jet::from_partials(&f.partials(s, t, order)?, order), &j0, order))
            .collect::<Result<Vec<_>>>()?;
        jet::push_forward_many(&phis, &x, &y, order).map_err(|e| match e {
            Error::SingularJacobian { det, .. } => Error::SingularJacobian { s: s.to_f64(), t: t.to_f64(), det },
            other => other,
        })
    }

    /// Classifies the singular behavior at the edge `s = 0` and the corner
    /// `(0, 0)`.
    pub fn classify_singularity(&self) -> Result<SingularityReport> {
        let f = self.to_f64();
        let edge = f.edge_collapsed();
        let ds = partial_at_corner(&f, 1, 0)?;
        let dt = partial_at_corner(&f, 0, 1)?;
        let (ns, nt) = (norm(ds), norm(dt));
        let scale = 1.0f64.max(f.diameter());
        let tiny = 1e-12 * scale;
        if edge {
            let along_edge_det: f64 = (0..=8)
                .map(|k| f.det_jacobian(&0.0, &(k as f64 / 8.0)).map(f64::abs))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            if along_edge_det > 1e-9 * scale * scale {
                return Err(Error::IndeterminateSingularity(format!(
                    "edge s = 0 collapses but det ∇G reaches {along_edge_det:e} along it"
                )));
            }
            return Ok(SingularityReport { kind: SingularityType::A, locus: Locus::EdgeS0, lambda: None });
        }
        if ns <= tiny || nt <= tiny {
            return Err(Error::IndeterminateSingularity(format!(
                "a corner partial vanishes (|∂G/∂s| = {ns:e}, |∂G/∂t| = {nt:e}) without an edge collapse"
            )));
        }
        let cos = (ds[0] * dt[0] + ds[1] * dt[1]) / (ns * nt);
        let angle = cos.clamp(-1.0, 1.0).acos();
        if (std::f64::consts::PI - angle).abs() <= ANTIPARALLEL_TOL {
            return Ok(SingularityReport { kind: SingularityType::B, locus: Locus::Corner00, lambda: Some(ns / nt) });
        }
        Ok(SingularityReport { kind: SingularityType::Regular, locus: Locus::None, lambda: None })
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn partial_at_corner(g: &GeometryMap<f64>, ds: usize, dt: usize) -> Result<[f64; 2]> {
    let j = g.jacobian(&0.0, &0.0)?;
    Ok(if ds == 1 { [j[0][0], j[1][0]] } else {
        debug_assert_eq!(dt, 1);
        [j[0][1], j[1][1]]
    })
}

fn eval_parts(parts: &[SplineCoefficients<f64>; 3], s: f64, t: f64) -> Result<[f64; 2]> {
    let w = parts[0].eval(&s, &t)?;
    if w <= 0.0 {
        return Err(Error::NonPositiveWeight { s, t, value: w });
    }
    Ok([parts[1].eval(&s, &t)? / w, parts[2].eval(&s, &t)? / w])
}

impl GeometryMap<f64> {
    /// Whether all homogeneous control points of the `i = 0` row are
    /// projectively equal.
    fn edge_collapsed(&self) -> bool {
        let nt = self.g0.space().shape().1;
        let pts: Vec<[f64; 3]> =
            (0..nt).map(|j| [self.g0.coeffs()[(0, j)], self.g1.coeffs()[(0, j)], self.g2.coeffs()[(0, j)]]).collect();
        let first = pts[0];
        if first[0] <= 0.0 {
            return false;
        }
        let (x0, y0) = (first[1] / first[0], first[2] / first[0]);
        let scale = 1.0f64.max(x0.abs()).max(y0.abs());
        pts.iter().all(|p| p[0] > 0.0 && (p[1] / p[0] - x0).abs() <= 1e-12 * scale && (p[2] / p[0] - y0).abs() <= 1e-12 * scale)
    }

    /// Diameter of the seed point cloud.
    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.seeds {
            for d in 0..2 {
                lo[d] = lo[d].min(p[2 + d]);
                hi[d] = hi[d].max(p[2 + d]);
            }
        }
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    }

    /// Parameter of the nearest seed to `x`.
    pub fn seed_for(&self, x: [f64; 2]) -> (f64, f64) {
        let best = self
            .seeds
            .iter()
            .min_by(|a, b| {
                let da = (a[2] - x[0]).hypot(a[3] - x[1]);
                let db = (b[2] - x[0]).hypot(b[3] - x[1]);
                da.total_cmp(&db)
            })
            .expect("seed grid is nonempty");
        (best[0], best[1])
    }

    /// Newton iteration for `G(s, t) = x`, clamped to the unit square, with
    /// step halving on the residual. Seeds from the grid when `guess` is
    /// `None`.
    pub fn invert(&self, x: [f64; 2], guess: Option<(f64, f64)>) -> Result<(f64, f64)> {
        let (mut s, mut t) = guess.unwrap_or_else(|| self.seed_for(x));
        let scale = 1.0f64.max(self.diameter());
        let residual = |s: f64, t: f64| -> Result<[f64; 2]> {
            let g = self.eval(&s, &t)?;
            Ok([x[0] - g[0], x[1] - g[1]])
        };
        let mut r = residual(s, t)?;
        for it in 1..=NEWTON_MAX_ITER {
            let j = self.jacobian(&s, &t)?;
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < MIN_ABS_DET {
                return Err(Error::SingularJacobian { s, t, det });
            }
            let ds = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
            let dt = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
            let mut step = 1.0;
            let r_norm = norm(r);
            let (mut ns, mut nt, mut nr);
            loop {
                ns = (s + step * ds).clamp(0.0, 1.0);
                nt = (t + step * dt).clamp(0.0, 1.0);
                nr = residual(ns, nt)?;
                if norm(nr) <= r_norm || step < 1e-4 {
                    break;
                }
                step *= 0.5;
            }
            let moved = (ns - s).hypot(nt - t);
            s = ns;
            t = nt;
            r = nr;
            if moved <= NEWTON_STEP_TOL {
                if norm(r) <= 1e-10 * scale {
                    return Ok((s, t));
                }
                return Err(Error::InversionDiverged { iterations: it, residual: norm(r) });
            }
        }
        if norm(r) <= 1e-12 * scale {
            return Ok((s, t));
        }
        Err(Error::InversionDiverged { iterations: NEWTON_MAX_ITER, residual: norm(r) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularityType {
    Regular,
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Locus {
    None,
    /// The parameter edge `{0} × [0, 1]`.
    EdgeS0,
    /// The parameter corner `(0, 0)`.
    Corner00,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport {
    pub kind: SingularityType,
    pub locus: Locus,
    /// `λ > 0` with `∂G/∂s = -λ ∂G/∂t` at the corner, for type B.
    pub lambda: Option<f64>,
}

pub fn eval_geometry<T: Scalar>(g: &GeometryMap<T>, s: &T, t: &T) -> Result<[T; 2]> {
    g.eval(s, t)
}

pub fn jacobian<T: Scalar>(g: &GeometryMap<T>, s: &T, t: &T) -> Result<[[T; 2]; 2]> {
    g.jacobian(s, t)
}

pub fn classify_singularity<T: Scalar>(g: &GeometryMap<T>) -> Result<SingularityReport> {
    g.classify_singularity()
}

pub fn invert_geometry(g: &GeometryMap<f64>, x: [f64; 2], guess: (f64, f64)) -> Result<(f64, f64)> {
    g.invert(x, Some(guess))
}

/// `φ = (f / g0) ∘ G^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsogeometricFunction<T> {
    pub geometry: GeometryMap<T>,
    pub f: SplineCoefficients<T>,
}

impl<T: Scalar> IsogeometricFunction<T> {
    pub fn new(geometry: GeometryMap<T>, f: SplineCoefficients<T>) -> Result<Self> {
        if f.space() != geometry.g0.space() {
            return Err(Error::ShapeMismatch { expected: geometry.g0.space().shape(), found: f.space().shape() });
        }
        Ok(Self { geometry, f })
    }

    pub fn to_f64(&self) -> IsogeometricFunction<f64> {
        IsogeometricFunction { geometry: self.geometry.to_f64(), f: self.f.to_f64() }
    }

    /// Largest supported total derivative order, `min(p, q)`.
    pub fn max_order(&self) -> usize {
        let (p, q) = self.geometry.degrees();
        p.min(q)
    }

    /// `φ(G(s, t)) = f(s, t) / g0(s, t)`.
    pub fn eval_at_param(&self, s: &T, t: &T) -> Result<T> {
        let w = self.geometry.weight(s, t)?;
        Ok(self.f.eval(s, t)? / w)
    }

    /// All physical partials `out[a][b] = ∂^{a+b} φ / ∂x^a ∂y^b` with
    /// `a + b <= order` at the image of `(s, t)`.
    pub fn physical_derivatives_at_param(&self, s: &T, t: &T, order: usize) -> Result<Vec<Vec<T>>> {
        if order > self.max_order() {
            return Err(Error::DerivativeOrderUnsupported { order, max: self.max_order() });
        }
        let mut out = self.geometry.physical_partials_many(std::slice::from_ref(&self.f), s, t, order)?;
        Ok(out.pop().expect("one function in, one out"))
    }
}

impl IsogeometricFunction<f64> {
    /// `∂^{a1+a2} φ / ∂x^a1 ∂y^a2` at the physical point `x`.
    pub fn eval_at(&self, x: [f64; 2], order: (usize, usize)) -> Result<f64> {
        let (s, t) = self.geometry.invert(x, None)?;
        let n = order.0 + order.1;
        let d = self.physical_derivatives_at_param(&s, &t, n)?;
        Ok(d[order.0][order.1])
    }
}

pub fn eval_isogeometric(phi: &IsogeometricFunction<f64>, x: [f64; 2], order: (usize, usize)) -> Result<f64> {
    phi.eval_at(x, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spline::{KnotVector, TensorProductSpace};

    fn identity_geometry() -> GeometryMap<f64> {
        let kv = KnotVector::open(2, &[crate::scalar::rat(1, 2)]).unwrap();
        let space = TensorProductSpace::new(kv.clone(), kv);
        let g0 = SplineCoefficients::constant(space.clone(), 1.0);
        let g1 = SplineCoefficients::from_polynomial(space.clone(), &Poly2::x()).unwrap();
        let g2 = SplineCoefficients::from_polynomial(space, &Poly2::y()).unwrap();
        GeometryMap::new(g0, g1, g2).unwrap()
    }

    #[test]
    fn identity_map_and_inverse() {
        let g = identity_geometry();
        let [x, y] = g.eval(&0.3, &0.7).unwrap();
        assert!((x - 0.3).abs() < 1e-15 && (y - 0.7).abs() < 1e-15);
        assert!((g.det_jacobian(&0.2, &0.9).unwrap() - 1.0).abs() < 1e-14);
        let (s, t) = g.invert([0.41, 0.13], None).unwrap();
        assert!((s - 0.41).abs() < 1e-12 && (t - 0.13).abs() < 1e-12);
        assert_eq!(g.classify_singularity().unwrap().kind, SingularityType::Regular);
    }

    #[test]
    fn exterior_point_diverges() {
        let g = identity_geometry();
        assert!(matches!(g.invert([1.5, 0.5], None), Err(Error::InversionDiverged { .. })));
    }

    #[test]
    fn non_positive_weight_is_rejected() {
        let g = identity_geometry();
        let neg = g.g0.scale(&-1.0);
        assert!(matches!(GeometryMap::new(neg, g.g1.clone(), g.g2.clone()), Err(Error::NonPositiveWeight { .. })));
    }

    #[test]
    fn coordinate_function_has_unit_gradient() {
        let g = identity_geometry();
        let phi = IsogeometricFunction::new(g.clone(), g.g1.clone()).unwrap();
        let d = phi.physical_derivatives_at_param(&0.3, &0.6, 2).unwrap();
        assert!((d[0][0] - 0.3).abs() < 1e-14);
        assert!((d[1][0] - 1.0).abs() < 1e-12 && d[0][1].abs() < 1e-12);
        assert!(matches!(
            phi.physical_derivatives_at_param(&0.3, &0.6, 3),
            Err(Error::DerivativeOrderUnsupported { .. })
        ));
    }
}
