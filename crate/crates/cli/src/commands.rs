use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use igs_core::geometry::{GeometryMap, SingularityType};
use igs_core::io::{
    fraction_table, from_json_str, matrix_json, to_json_string, GeometryDocument, Num, SmoothSpaceDocument,
    SplineDocument,
};
use igs_core::matrix::RationalMatrix;
use igs_core::poly::Poly2;
use igs_core::presets;
use igs_core::scalar::{parse_rational_list, rat, Rational, Scalar};
use igs_core::singular_basis::{
    build_smooth_space_a_with, build_smooth_space_b_with, check_membership, BasisLabel, BuildOptions,
    SingularityKind, SmoothSpace,
};
use igs_core::smoothness::{csv_field, verify_ck_many, SmoothnessVerdict, Tolerances};
use igs_core::spline::{KnotVector, SplineCoefficients, TensorProductSpace};
use igs_core::transform::{combined_row_coefficients, degree_elevation_matrix, knot_insertion_matrix};

use crate::{
    BuildArgs, CheckArgs, Format, FunctionArgs, Kind, MatricesArgs, MembershipArgs, Mode, Outcome, OutputArgs,
    Preset, SampleArgs, SpaceArgs,
};

pub fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_doc<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D> {
    from_json_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn knot_vector(degree: usize, knots: &str) -> Result<KnotVector> {
    let interior = parse_rational_list(knots).with_context(|| format!("parsing knots `{knots}`"))?;
    Ok(KnotVector::open(degree, &interior)?)
}

fn space_from(args: &SpaceArgs) -> Result<TensorProductSpace> {
    Ok(TensorProductSpace::new(knot_vector(args.degree_s, &args.knots_s)?, knot_vector(args.degree_t, &args.knots_t)?))
}

fn kind_of(kind: Kind) -> SingularityKind {
    match kind {
        Kind::A => SingularityKind::A,
        Kind::B => SingularityKind::B,
    }
}

pub fn label_name(label: BasisLabel) -> String {
    match label {
        BasisLabel::Smooth { i, j } => format!("smooth({i},{j})"),
        BasisLabel::Standard { i, j } => format!("standard({i},{j})"),
    }
}

fn render_matrix(format: Format, title: &str, m: &RationalMatrix) -> Result<String> {
    match format {
        Format::Json => Ok(to_json_string(&matrix_json(m))?),
        Format::Text => Ok(fraction_table(title, m)),
        Format::Csv => bail!("matrices support --format json or text"),
    }
}

pub fn matrices(args: &MatricesArgs) -> Result<Outcome> {
    let format = args.output.format.unwrap_or(Format::Json);
    let selected = [args.elevate.is_some(), args.insert, args.row.is_some()].iter().filter(|&&b| b).count();
    if selected != 1 {
        bail!("choose exactly one of --elevate I Q, --insert, --row I");
    }
    let (title, m) = if let Some(v) = &args.elevate {
        let (i, q) = (v[0], v[1]);
        (format!("E^{q}_{i}"), degree_elevation_matrix(i, q)?)
    } else {
        let q = args.degree_t.ok_or_else(|| anyhow!("--degree-t is required"))?;
        let kv = knot_vector(q, &args.knots_t)?;
        match args.row {
            Some(i) => (format!("E^{q}_{i} K_t"), combined_row_coefficients(i, q, q, &kv)?),
            None => ("K_t".to_string(), knot_insertion_matrix(&KnotVector::bezier(q), kv.interior_knots())?),
        }
    };
    emit(&args.output, &render_matrix(format, &title, &m)?)?;
    Ok(Outcome::Passed)
}

pub fn build_space(space: &TensorProductSpace, k: usize, kind: SingularityKind, strict: bool) -> Result<SmoothSpace> {
    let opts = BuildOptions { strict_multiplicity: strict };
    Ok(match kind {
        SingularityKind::A => build_smooth_space_a_with(space, k, opts)?,
        SingularityKind::B => build_smooth_space_b_with(space, k, opts)?,
    })
}

pub fn smooth_space_text(sm: &SmoothSpace) -> String {
    let (ns, nt) = sm.space.shape();
    let mut out = format!(
        "dimension {} (smooth {}, standard {}), rank {}\n",
        sm.len(),
        sm.smooth_count(),
        sm.standard_count(),
        sm.rank()
    );
    for b in &sm.basis {
        let m = RationalMatrix::from_vec(ns, nt, b.coeffs.clone()).expect("coefficient length matches space");
        out.push('\n');
        out.push_str(&fraction_table(&label_name(b.label), &m));
    }
    out
}

pub fn build_basis(args: &BuildArgs) -> Result<Outcome> {
    let space = space_from(&args.space)?;
    let sm = build_space(&space, args.smooth_order, kind_of(args.kind), args.strict)?;
    if sm.rank() < sm.len() {
        eprintln!("warning: basis has rank {} < {} functions", sm.rank(), sm.len());
    }
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json_string(&SmoothSpaceDocument::from_smooth_space(&sm))?,
        Format::Text => smooth_space_text(&sm),
        Format::Csv => bail!("build-basis supports --format json or text"),
    };
    emit(&args.output, &text)?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct WitnessTerm {
    /// Exponent of `u`.
    a: usize,
    /// Exponent of `v`.
    b: usize,
    coeff: Num,
}

#[derive(Serialize)]
struct MembershipReport {
    label: String,
    member: bool,
    failed_order: Option<usize>,
    witness: Option<Vec<WitnessTerm>>,
}

fn witness_terms(p: &Poly2<Rational>) -> Vec<WitnessTerm> {
    let mut out = Vec::new();
    for a in 0..=p.degree_x() {
        for b in 0..=p.degree_y() {
            let c = p.coeff(a, b);
            if !c.is_negligible(1.0) {
                out.push(WitnessTerm { a, b, coeff: Num::exact(&c) });
            }
        }
    }
    out
}

fn membership_report(label: String, f: &SplineCoefficients<Rational>, k: usize, kind: SingularityKind) -> Result<MembershipReport> {
    let m = check_membership(f, k, kind)?;
    Ok(MembershipReport {
        label,
        member: m.member,
        failed_order: m.failed_order,
        witness: m.witness.as_ref().map(witness_terms),
    })
}

pub fn membership(args: &MembershipArgs) -> Result<Outcome> {
    let text = read_text(&args.input)?;
    let value: serde_json::Value =
        from_json_str(&text).with_context(|| format!("parsing {}", args.input.display()))?;
    let reports = if value.get("basis").is_some() {
        let doc: SmoothSpaceDocument = from_json_str(&text).with_context(|| format!("parsing {}", args.input.display()))?;
        let sm = doc.to_smooth_space()?;
        let k = args.smooth_order.unwrap_or(sm.order);
        let kind = args.kind.map(kind_of).unwrap_or(sm.kind);
        (0..sm.len())
            .map(|n| membership_report(label_name(sm.basis[n].label), &sm.function(n)?, k, kind))
            .collect::<Result<Vec<_>>>()?
    } else {
        let doc: SplineDocument = from_json_str(&text).with_context(|| format!("parsing {}", args.input.display()))?;
        let k = args.smooth_order.ok_or_else(|| anyhow!("--smooth-order is required for a spline document"))?;
        let kind = args.kind.ok_or_else(|| anyhow!("--type is required for a spline document"))?;
        vec![membership_report(stem(&args.input), &doc.to_spline()?, k, kind_of(kind))?]
    };
    let all = reports.iter().all(|r| r.member);
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => emit(&args.output, &to_json_string(&reports)?)?,
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!("{} {}\n", r.label, if r.member { "member" } else { "not a member" }));
            }
            emit(&args.output, &out)?;
        }
        Format::Csv => bail!("membership supports --format json or text"),
    }
    Ok(if all { Outcome::Passed } else { Outcome::Failed })
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn convert<S: Scalar, T: Scalar>(f: &SplineCoefficients<S>) -> Result<SplineCoefficients<T>> {
    let flat = f.flat().iter().map(|x| Ok(T::from_rational(&x.to_rational()?))).collect::<Result<Vec<T>>>()?;
    Ok(SplineCoefficients::from_flat(f.space().clone(), &flat)?)
}

fn convert_geometry<S: Scalar, T: Scalar>(g: &GeometryMap<S>) -> Result<GeometryMap<T>> {
    Ok(GeometryMap::new(convert(&g.g0)?, convert(&g.g1)?, convert(&g.g2)?)?)
}

fn is_decimal(n: &Num) -> bool {
    n.0.contains(['.', 'e', 'E'])
}

fn load_geometry<T: Scalar>(src: &FunctionArgs) -> Result<GeometryMap<T>> {
    let exact = src.mode == Mode::Exact;
    match (&src.geometry, src.preset) {
        (Some(path), None) => {
            let doc: GeometryDocument = read_doc(path)?;
            if exact && [&doc.g0, &doc.g1, &doc.g2].iter().any(|g| g.iter().flatten().any(is_decimal)) {
                bail!("exact mode needs integers or \"num/den\" strings; {} contains decimal values", path.display());
            }
            Ok(doc.to_geometry()?)
        }
        (None, Some(preset)) => match preset {
            Preset::Paper3 | Preset::Paper3Circular => {
                if exact {
                    bail!("exact mode is not available for the type-B example: its weights are irrational");
                }
                let w = if preset == Preset::Paper3 { presets::ArcWeight::Stated } else { presets::ArcWeight::Circular };
                convert_geometry(&presets::example3_geometry(w)?)
            }
            Preset::QuarterDisk2 => convert_geometry(&presets::quarter_disk_geometry(2)?),
            Preset::QuarterDisk3 => convert_geometry(&presets::quarter_disk_geometry(3)?),
            Preset::Square => convert_geometry(&presets::square_geometry()?),
        },
        _ => bail!("give exactly one of --geometry FILE or --preset NAME"),
    }
}

/// Functions from `--space` or `--function`, converted to `T`.
fn load_functions<T: Scalar>(src: &FunctionArgs) -> Result<Option<Vec<(String, SplineCoefficients<T>)>>> {
    if let Some(path) = &src.space {
        let sm = read_doc::<SmoothSpaceDocument>(path)?.to_smooth_space()?;
        let fs = (0..sm.len())
            .map(|n| Ok((label_name(sm.basis[n].label), convert(&sm.function(n)?)?)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(fs));
    }
    if src.function.is_empty() {
        return Ok(None);
    }
    src.function
        .iter()
        .map(|path| {
            let doc: SplineDocument = read_doc(path)?;
            if src.mode == Mode::Exact && doc.coeffs.iter().flatten().any(is_decimal) {
                bail!("exact mode needs integers or \"num/den\" strings; {} contains decimal values", path.display());
            }
            Ok((stem(path), doc.to_spline()?))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn check_spaces<T: Scalar>(geo: &GeometryMap<T>, fs: &[(String, SplineCoefficients<T>)]) -> Result<()> {
    for (label, f) in fs {
        if f.space() != geo.g0.space() {
            bail!(
                "function {label} lives on a {:?} space but the geometry on a {:?} space",
                f.space().shape(),
                geo.g0.space().shape()
            );
        }
    }
    Ok(())
}

fn cell<T: Scalar>(x: &T) -> Result<String> {
    Ok(Num::from_scalar(x)?.0)
}

#[derive(Serialize)]
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn sample_typed<T: Scalar>(args: &SampleArgs) -> Result<Table> {
    let geo: GeometryMap<T> = load_geometry(&args.source)?;
    let fs = load_functions::<T>(&args.source)?.unwrap_or_default();
    check_spaces(&geo, &fs)?;
    if args.grid < 2 {
        bail!("--grid must be at least 2");
    }
    let mut columns: Vec<String> = ["s", "t", "x", "y", "detJ"].iter().map(|s| s.to_string()).collect();
    columns.extend((0..fs.len()).map(|n| format!("phi{n}")));
    let n = args.grid - 1;
    let mut rows = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let s = T::from_rational(&rat(i as i64, n as i64));
            let t = T::from_rational(&rat(j as i64, n as i64));
            let [x, y] = geo.eval(&s, &t)?;
            let det = geo.det_jacobian(&s, &t)?;
            let w = geo.g0.eval(&s, &t)?;
            let mut row = vec![cell(&s)?, cell(&t)?, cell(&x)?, cell(&y)?, cell(&det)?];
            for (_, f) in &fs {
                row.push(cell(&(f.eval(&s, &t)? / w.clone()))?);
            }
            rows.push(row);
        }
    }
    Ok(Table { columns, rows })
}

pub fn sample(args: &SampleArgs) -> Result<Outcome> {
    let table = match args.source.mode {
        Mode::Exact => sample_typed::<Rational>(args)?,
        Mode::Float => sample_typed::<f64>(args)?,
    };
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = table.columns.join(",");
            out.push('\n');
            for r in &table.rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => to_json_string(&table)?,
        Format::Text => bail!("sample supports --format csv or json"),
    };
    emit(&args.output, &text)?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct FunctionVerdict {
    label: String,
    passed: bool,
    verdict: SmoothnessVerdict,
}

#[derive(Serialize)]
struct CheckReport {
    mode: Mode,
    order: usize,
    tolerance_base: f64,
    passed: bool,
    functions: Vec<FunctionVerdict>,
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

fn check_typed<T: Scalar>(args: &CheckArgs, tol: &Tolerances) -> Result<(CheckReport, String)> {
    let geo: GeometryMap<T> = load_geometry(&args.source)?;
    let k = args.smooth_order;
    let fs = match load_functions::<T>(&args.source)? {
        Some(fs) => fs,
        None => {
            let kind = match geo.classify_singularity()?.kind {
                SingularityType::A => SingularityKind::A,
                SingularityType::B => SingularityKind::B,
                SingularityType::Regular => bail!("geometry has no singularity to check"),
            };
            let sm = build_space(geo.g0.space(), k, kind, false)?;
            (0..sm.len())
                .map(|n| Ok((label_name(sm.basis[n].label), convert(&sm.function(n)?)?)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    check_spaces(&geo, &fs)?;
    let splines: Vec<SplineCoefficients<T>> = fs.iter().map(|(_, f)| f.clone()).collect();
    let verdicts = verify_ck_many(&geo, &splines, k, tol)?;
    let mut csv = String::new();
    for ((label, _), v) in fs.iter().zip(&verdicts) {
        let body = v.traces_csv();
        let mut lines = body.lines();
        let header = lines.next().unwrap_or_default();
        if csv.is_empty() {
            csv.push_str(&format!("function,{header}\n"));
        }
        for line in lines {
            csv.push_str(&format!("{},{line}\n", csv_field(label)));
        }
    }
    let functions: Vec<FunctionVerdict> = fs
        .into_iter()
        .zip(verdicts)
        .map(|((label, _), verdict)| FunctionVerdict { label, passed: verdict.passed(), verdict })
        .collect();
    let passed = functions.iter().all(|f| f.passed);
    Ok((CheckReport { mode: args.source.mode, order: k, tolerance_base: tol.base, passed, functions }, csv))
}

pub fn check_smoothness(args: &CheckArgs) -> Result<Outcome> {
    let tol = Tolerances::from_env()?;
    let (report, csv) = match args.source.mode {
        Mode::Exact => check_typed::<Rational>(args, &tol)?,
        Mode::Float => check_typed::<f64>(args, &tol)?,
    };
    if let Some(path) = &args.csv {
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => emit(&args.output, &to_json_string(&report)?)?,
        Format::Text => {
            let mut out = String::new();
            for f in &report.functions {
                let spreads: Vec<String> =
                    (0..=report.order).map(|n| format!("{:.3e}", f.verdict.max_spread(n))).collect();
                out.push_str(&format!(
                    "{} {} spread [{}]\n",
                    f.label,
                    if f.passed { "pass" } else { "FAIL" },
                    spreads.join(", ")
                ));
            }
            emit(&args.output, &out)?;
        }
        Format::Csv => bail!("check-smoothness writes CSV traces with --csv; use --format json or text"),
    }
    Ok(if report.passed { Outcome::Passed } else { Outcome::Failed })
}
