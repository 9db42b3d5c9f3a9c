//! Numerical checks of the `C^k` limit condition at singular boundary points.
//!
//! Physical partials are evaluated exactly from parameter-space jets along
//! rays into the singular set, one ray per shell `h = 2^{-m}`, and each ray's
//! limit is extrapolated by Richardson. The verdict compares limits across
//! rays.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GeometryMap, IsogeometricFunction, SingularityType};
use crate::jet;
use crate::poly::Poly2;
use crate::scalar::{rat, rat_int, Rational, Scalar};
use crate::singular_basis::s_taylor_rows;
use crate::spline::SplineCoefficients;
use crate::triangular::{compose_into_space, reparam_a_polys, TriangularPatchA};

pub const DEFAULT_TOL_BASE: f64 = 1e-8;
pub const TOL_ENV: &str = "IGS_TOL_BASE";
/// Shells `h = 2^{-m}` for `m` in this range.
pub const FIRST_SHELL: u32 = 4;
pub const LAST_SHELL: u32 = 20;
const WINDOW: usize = 4;
/// Side of the barycentric regularity grid in [`verify_split`].
pub const SPLIT_GRID: usize = 40;

/// `tolerance(n) = base * 100^n` for derivative order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub base: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { base: DEFAULT_TOL_BASE }
    }
}

impl Tolerances {
    /// Reads `IGS_TOL_BASE`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(v) => {
                let base: f64 = v.trim().parse().map_err(|_| Error::InvalidNumber(v.clone()))?;
                if !(base.is_finite() && base > 0.0) {
                    return Err(Error::InvalidNumber(v));
                }
                Ok(Self { base })
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn for_order(&self, n: usize) -> f64 {
        self.base * 100f64.powi(n as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Parameter ray `origin + h * direction`, `h = 2^{-m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproachPath {
    pub label: String,
    pub origin: (Rational, Rational),
    pub direction: (Rational, Rational),
}

impl ApproachPath {
    pub fn point(&self, m: u32) -> (Rational, Rational) {
        let h = rat(1, 1i64 << m);
        (&self.origin.0 + &h * &self.direction.0, &self.origin.1 + &h * &self.direction.1)
    }
}

/// Rays `t = c` for type A, rays into the corner for type B.
pub fn approach_paths(kind: SingularityType) -> Vec<ApproachPath> {
    match kind {
        SingularityType::A => [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
            .iter()
            .map(|&(n, d)| {
                let c = rat(n, d);
                ApproachPath {
                    label: format!("t={}", crate::scalar::format_rational(&c)),
                    origin: (rat_int(0), c),
                    direction: (rat_int(1), rat_int(0)),
                }
            })
            .collect(),
        SingularityType::B => [(1, 0), (2, 1), (1, 1), (1, 2), (0, 1)]
            .iter()
            .map(|&(a, b)| ApproachPath {
                label: format!("ray({a},{b})"),
                origin: (rat_int(0), rat_int(0)),
                direction: (rat_int(a), rat_int(b)),
            })
            .collect(),
        SingularityType::Regular => Vec::new(),
    }
}

/// Regular boundary points spot-checked alongside the singular set.
fn boundary_points(kind: SingularityType) -> Vec<(Rational, Rational)> {
    let pts: [(i64, i64, i64, i64); 8] = match kind {
        SingularityType::B => [(0, 1, 1, 2), (0, 1, 1, 1), (1, 2, 0, 1), (1, 1, 0, 1), (1, 1, 1, 4), (1, 1, 1, 2), (1, 1, 1, 1), (1, 2, 1, 1)],
        _ => [(1, 1, 1, 3), (1, 1, 2, 3), (1, 3, 0, 1), (2, 3, 0, 1), (1, 3, 1, 1), (2, 3, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
    };
    pts.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSample {
    pub m: u32,
    pub s: f64,
    pub t: f64,
    /// `partials[a][b]`, or `None` where evaluation failed.
    pub partials: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathTrace {
    pub path: String,
    /// Raw samples; written by [`SmoothnessVerdict::traces_csv`] only.
    #[serde(skip)]
    pub samples: Vec<PathSample>,
    /// `window[a][b]`: first and last shell used for that partial.
    pub window: Vec<Vec<Option<(u32, u32)>>>,
    pub limit: Vec<Vec<f64>>,
    pub error_estimate: Vec<Vec<f64>>,
    /// Shells not used because evaluation failed or rounding dominated.
    pub excluded: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCheck {
    pub points: Vec<[f64; 2]>,
    pub min_abs_det: f64,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessVerdict {
    pub order_tested: usize,
    pub kind: SingularityType,
    pub mode: Mode,
    pub singular_point: [f64; 2],
    pub paths: Vec<String>,
    /// `limit_spread[a][b]`: largest difference of path limits.
    pub limit_spread: Vec<Vec<f64>>,
    /// Per derivative order.
    pub tolerance: Vec<f64>,
    /// Per derivative order.
    pub pass: Vec<bool>,
    pub boundary: BoundaryCheck,
    pub traces: Vec<PathTrace>,
}

impl SmoothnessVerdict {
    pub fn passed(&self) -> bool {
        self.pass.iter().all(|&p| p) && self.boundary.regular
    }

    /// Largest spread over all `|α| = n`.
    pub fn max_spread(&self, n: usize) -> f64 {
        (0..=n).filter_map(|a| self.limit_spread.get(a).and_then(|r| r.get(n - a))).fold(0.0, |m, &v| nan_max(m, v))
    }

    /// One row per sample: `path,m,s,t` then every partial in graded order.
    pub fn traces_csv(&self) -> String {
        let monos = jet::graded_monomials(self.order_tested);
        let mut out = String::from("path,m,s,t");
        for (a, b) in &monos {
            out.push_str(&format!(",d{a}{b}"));
        }
        out.push('\n');
        for tr in &self.traces {
            for smp in &tr.samples {
                out.push_str(&format!("{},{},{:e},{:e}", csv_field(&tr.path), smp.m, smp.s, smp.t));
                for &(a, b) in &monos {
                    match &smp.partials {
                        Some(p) => out.push_str(&format!(",{:e}", p[a][b])),
                        None => out.push(','),
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Quotes a CSV field that contains a comma or a quote.
pub fn csv_field(text: &str) -> String {
    if text.contains([',', '"']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Three Richardson levels for `v(h), v(h/2), v(h/4), v(h/8)` with error
/// expansion in powers of `h`. Returns the limit and `|R3 - R2|`.
fn richardson<T: Scalar>(v: &[T]) -> (T, T) {
    debug_assert_eq!(v.len(), WINDOW);
    let two = T::from_i64(2);
    let r1: Vec<T> = v.windows(2).map(|w| two.clone() * w[1].clone() - w[0].clone()).collect();
    let r2: Vec<T> =
        r1.windows(2).map(|w| (T::from_i64(4) * w[1].clone() - w[0].clone()) / T::from_i64(3)).collect();
    let r3 = (T::from_i64(8) * r2[1].clone() - r2[0].clone()) / T::from_i64(7);
    let err = (r3.clone() - r2[1].clone()).abs_val();
    (r3, err)
}

struct RawTrace<T> {
    shells: Vec<u32>,
    points: Vec<(Rational, Rational)>,
    values: Vec<Result<Vec<Vec<Vec<T>>>>>,
}

fn trace_path<T: Scalar>(
    geo: &GeometryMap<T>,
    fs: &[SplineCoefficients<T>],
    path: &ApproachPath,
    k: usize,
) -> RawTrace<T> {
    let shells: Vec<u32> = (FIRST_SHELL..=LAST_SHELL).collect();
    let points: Vec<(Rational, Rational)> = shells.iter().map(|&m| path.point(m)).collect();
    let values = points
        .iter()
        .map(|(s, t)| geo.physical_partials_many(fs, &T::from_rational(s), &T::from_rational(t), k))
        .collect();
    RawTrace { shells, points, values }
}

fn zero_grid(k: usize, v: f64) -> Vec<Vec<f64>> {
    (0..=k).map(|a| vec![v; k + 1 - a]).collect()
}

fn summarize<T: Scalar>(raw: &RawTrace<T>, n: usize, label: &str, k: usize) -> PathTrace {
    let samples: Vec<PathSample> = raw
        .shells
        .iter()
        .zip(&raw.points)
        .zip(&raw.values)
        .map(|((&m, (s, t)), v)| PathSample {
            m,
            s: s.to_f64(),
            t: t.to_f64(),
            partials: v.as_ref().ok().map(|all| all[n].iter().map(|r| r.iter().map(T::to_f64).collect()).collect()),
        })
        .collect();
    let ok: Vec<usize> = (0..raw.values.len()).filter(|&i| raw.values[i].is_ok()).collect();
    let runs: Vec<usize> =
        (0..ok.len().saturating_sub(WINDOW - 1)).filter(|&w| ok[w + WINDOW - 1] - ok[w] == WINDOW - 1).collect();
    let extrapolate = |w: usize, a: usize, b: usize| -> (T, T) {
        let seq: Vec<T> = (ok[w]..ok[w] + WINDOW)
            .map(|i| raw.values[i].as_ref().expect("window samples succeeded")[n][a][b].clone())
            .collect();
        richardson(&seq)
    };
    let mut limit = zero_grid(k, f64::NAN);
    let mut error_estimate = zero_grid(k, f64::NAN);
    let mut window = vec![vec![None; k + 1]; k + 1];
    let mut deepest = None;
    for a in 0..=k {
        window[a].truncate(k + 1 - a);
        for b in 0..=k - a {
            let chosen = if T::EXACT {
                runs.last().map(|&w| (w, extrapolate(w, a, b)))
            } else {
                // Deep shells lose digits to cancellation; take the most
                // self-consistent window for this partial.
                runs.iter()
                    .map(|&w| (w, extrapolate(w, a, b)))
                    .filter(|(_, (l, e))| l.to_f64().is_finite() && e.to_f64().is_finite())
                    .min_by(|x, y| x.1 .1.to_f64().total_cmp(&y.1 .1.to_f64()))
            };
            if let Some((w, (l, e))) = chosen {
                let last = raw.shells[ok[w + WINDOW - 1]];
                limit[a][b] = l.to_f64();
                error_estimate[a][b] = e.to_f64();
                window[a][b] = Some((raw.shells[ok[w]], last));
                deepest = deepest.max(Some(last));
            }
        }
    }
    let excluded = raw
        .shells
        .iter()
        .zip(&raw.values)
        .filter(|(&m, v)| v.is_err() || deepest.map_or(true, |d| m > d))
        .map(|(&m, _)| m)
        .collect();
    PathTrace { path: label.to_string(), samples, window, limit, error_estimate, excluded }
}

fn boundary_check<T: Scalar>(geo: &GeometryMap<T>, fs: &[SplineCoefficients<T>], kind: SingularityType, k: usize) -> BoundaryCheck {
    let f = geo.to_f64();
    let scale = 1.0f64.max(f.diameter());
    let mut min_det = f64::INFINITY;
    let mut regular = true;
    let mut points = Vec::new();
    for (s, t) in boundary_points(kind) {
        let (sf, tf) = (s.to_f64(), t.to_f64());
        points.push([sf, tf]);
        match f.det_jacobian(&sf, &tf) {
            Ok(d) => min_det = min_det.min(d.abs()),
            Err(_) => regular = false,
        }
        let finite = geo
            .physical_partials_many(fs, &T::from_rational(&s), &T::from_rational(&t), k)
            .map(|all| all.iter().flatten().flatten().all(|v| v.to_f64().is_finite()))
            .unwrap_or(false);
        regular &= finite;
    }
    regular &= min_det > 1e-10 * scale * scale;
    BoundaryCheck { points, min_abs_det: min_det, regular }
}

/// [`verify_ck`] for every `fs[n] / g0` over one geometry, sharing the jet
/// systems. The numeric mode follows `T`.
pub fn verify_ck_many<T: Scalar>(
    geo: &GeometryMap<T>,
    fs: &[SplineCoefficients<T>],
    k: usize,
    tol: &Tolerances,
) -> Result<Vec<SmoothnessVerdict>> {
    let (p, q) = geo.degrees();
    if k > p.min(q) {
        return Err(Error::OrderTooLarge { order: k, max: p.min(q) });
    }
    for f in fs {
        if f.space() != geo.g0.space() {
            return Err(Error::ShapeMismatch { expected: geo.g0.space().shape(), found: f.space().shape() });
        }
    }
    let report = geo.classify_singularity()?;
    let paths = approach_paths(report.kind);
    if paths.is_empty() {
        return Err(Error::NotSingular);
    }
    let [x, y] = geo.to_f64().eval(&0.0, &0.0)?;
    let raws: Vec<RawTrace<T>> = paths.par_iter().map(|path| trace_path(geo, fs, path, k)).collect();
    let boundary = boundary_check(geo, fs, report.kind, k);
    let tolerance: Vec<f64> = (0..=k).map(|n| tol.for_order(n)).collect();
    Ok((0..fs.len())
        .map(|n| {
            let traces: Vec<PathTrace> =
                raws.iter().zip(&paths).map(|(raw, path)| summarize(raw, n, &path.label, k)).collect();
            let mut spread = zero_grid(k, 0.0);
            for (a, row) in spread.iter_mut().enumerate() {
                for (b, v) in row.iter_mut().enumerate() {
                    let lims: Vec<f64> = traces.iter().map(|tr| tr.limit[a][b]).collect();
                    *v = if lims.iter().any(|l| !l.is_finite()) {
                        f64::NAN
                    } else {
                        let hi = lims.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        let lo = lims.iter().copied().fold(f64::INFINITY, f64::min);
                        hi - lo
                    };
                }
            }
            let pass = (0..=k)
                .map(|order| {
                    (0..=order).all(|a| {
                        let v = spread[a][order - a];
                        v.is_finite() && v <= tolerance[order]
                    })
                })
                .collect();
            SmoothnessVerdict {
                order_tested: k,
                kind: report.kind,
                mode: if T::EXACT { Mode::Exact } else { Mode::Float },
                singular_point: [x, y],
                paths: paths.iter().map(|p| p.label.clone()).collect(),
                limit_spread: spread,
                tolerance: tolerance.clone(),
                pass,
                boundary: boundary.clone(),
                traces,
            }
        })
        .collect())
}

/// Checks that all physical partials of `φ` up to order `k` have a unique
/// limit at the singular point.
pub fn verify_ck<T: Scalar>(phi: &IsogeometricFunction<T>, k: usize, tol: &Tolerances) -> Result<SmoothnessVerdict> {
    let mut v = verify_ck_many(&phi.geometry, std::slice::from_ref(&phi.f), k, tol)?;
    Ok(v.pop().expect("one function in, one verdict out"))
}

/// Physical partials of `(f / g0) ∘ G^{-1}` at the image of `(s, t)`,
/// `s > 0`, computed in triangle coordinates: every jet is first carried
/// through `u_A^{-1}(u, v) = (u, v / u)`.
pub fn physical_partials_triangle_route<T: Scalar>(
    geo: &GeometryMap<T>,
    f: &SplineCoefficients<T>,
    s: &T,
    t: &T,
    order: usize,
) -> Result<Vec<Vec<T>>> {
    if s.is_negligible(0.0) || *s <= T::zero() {
        return Err(Error::SingularPoint);
    }
    // σ = δu, τ = (v0 + δv) / (u0 + δu) - t0 with u0 = s, v0 = s t.
    let sigma: Poly2<T> = Poly2::x();
    let num = Poly2::constant(s.clone() * t.clone()).add(&Poly2::y());
    let den = Poly2::constant(s.clone()).add(&Poly2::x());
    let mut tau = jet::div(&num, &den, order)?;
    tau.set_coeff(0, 0, T::zero());
    let carry = |g: &SplineCoefficients<T>| -> Result<Poly2<T>> {
        let j = jet::from_partials(&g.partials(s, t, order)?, order);
        Ok(jet::compose(&j, &sigma, &tau, order))
    };
    let r0 = carry(&geo.g0)?;
    let mut x = jet::div(&carry(&geo.g1)?, &r0, order)?;
    let mut y = jet::div(&carry(&geo.g2)?, &r0, order)?;
    x.set_coeff(0, 0, T::zero());
    y.set_coeff(0, 0, T::zero());
    let phi = jet::div(&carry(f)?, &r0, order)?;
    jet::push_forward(&phi, &x, &y, order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetMismatch {
    /// Homogeneous component `0..=2`.
    pub component: usize,
    /// Order of the `s`-Taylor coefficient that differs.
    pub s_order: usize,
    /// First differing B-spline coefficient of that Taylor coefficient in `t`.
    pub t_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub order: usize,
    pub jet_mismatch: Option<JetMismatch>,
    pub grid: usize,
    pub min_abs_det: f64,
    /// Barycentric grid node `(i, j)`, `u = i / grid`, `v = j / grid`, where
    /// `|det|` is smallest or the orientation first flips.
    pub worst_node: (usize, usize),
    pub regular: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.jet_mismatch.is_none() && self.regular
    }
}

/// Checks `G = T ∘ u_A` on the first `s`-span to order `k` and regularity of
/// the rational triangular map `T = (ϱ1/ϱ0, ϱ2/ϱ0)`.
pub fn verify_split(geo: &GeometryMap<Rational>, rho: &TriangularPatchA<Rational>, k: usize) -> Result<SplitReport> {
    if rho.dim() != 3 {
        return Err(Error::Format(format!("triangular patch must be homogeneous with 3 coordinates, found {}", rho.dim())));
    }
    let polys: Vec<Poly2<Rational>> = (0..3).map(|d| rho.component_poly(d)).collect();
    let composed = compose_into_space(&polys, &reparam_a_polys(), geo.g0.space())?;
    let mut mismatch = None;
    'outer: for (component, (g, target)) in [&geo.g0, &geo.g1, &geo.g2].into_iter().zip(&composed).enumerate() {
        for (s_order, (a, b)) in s_taylor_rows(g, k).into_iter().zip(s_taylor_rows(target, k)).enumerate() {
            if let Some(t_index) = a.iter().zip(&b).position(|(x, y)| x != y) {
                mismatch = Some(JetMismatch { component, s_order, t_index });
                break 'outer;
            }
        }
    }

    let pf: Vec<Poly2<f64>> = polys.iter().map(|p| p.map(|c| c.to_f64())).collect();
    let du: Vec<Poly2<f64>> = pf.iter().map(|p| p.derivative(1, 0)).collect();
    let dv: Vec<Poly2<f64>> = pf.iter().map(|p| p.derivative(0, 1)).collect();
    let n = SPLIT_GRID;
    let mut min_det = f64::INFINITY;
    let mut worst = (0, 0);
    let mut sign = 0.0f64;
    let mut flipped = false;
    for i in 0..=n {
        for j in 0..=i {
            let (u, v) = (i as f64 / n as f64, j as f64 / n as f64);
            let r: Vec<f64> = pf.iter().map(|p| p.eval(&u, &v)).collect();
            let ru: Vec<f64> = du.iter().map(|p| p.eval(&u, &v)).collect();
            let rv: Vec<f64> = dv.iter().map(|p| p.eval(&u, &v)).collect();
            if r[0] <= 0.0 {
                return Err(Error::NonPositiveWeight { s: u, t: v, value: r[0] });
            }
            // ∂(ϱd/ϱ0) = (∂ϱd ϱ0 - ϱd ∂ϱ0) / ϱ0², d = 1, 2.
            let w2 = r[0] * r[0];
            let xu = (ru[1] * r[0] - r[1] * ru[0]) / w2;
            let xv = (rv[1] * r[0] - r[1] * rv[0]) / w2;
            let yu = (ru[2] * r[0] - r[2] * ru[0]) / w2;
            let yv = (rv[2] * r[0] - r[2] * rv[0]) / w2;
            let det = xu * yv - xv * yu;
            if !flipped && sign != 0.0 && det != 0.0 && det.signum() != sign {
                flipped = true;
                worst = (i, j);
            }
            if sign == 0.0 && det != 0.0 {
                sign = det.signum();
            }
            if det.abs() < min_det {
                min_det = det.abs();
                if !flipped {
                    worst = (i, j);
                }
            }
        }
    }
    let regular = !flipped && min_det > 1e-12;
    Ok(SplitReport { order: k, jet_mismatch: mismatch, grid: n, min_abs_det: min_det, worst_node: worst, regular })
}
