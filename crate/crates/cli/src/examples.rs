use anyhow::{bail, Result};
use serde::Serialize;

use igs_core::io::{fraction_table, matrix_json, to_json_string, Num, TrianglePatchDocument};
use igs_core::matrix::RationalMatrix;
use igs_core::presets::{self, ArcWeight};
use igs_core::spline::KnotVector;
use igs_core::transform::{combined_row_coefficients, degree_elevation_matrix, knot_insertion_matrix};

use crate::commands::emit;
use crate::{ArcWeightArg, ExampleName, ExamplesArgs, Format, Outcome};

/// Matrices of a worked tensor-product example at degree `q`.
pub struct ExampleMatrices {
    pub degree: usize,
    pub knots_t: KnotVector,
    /// `E^q_i` for `i = 0..=q`.
    pub elevation: Vec<RationalMatrix>,
    pub insertion: RationalMatrix,
    /// Coefficient rows of `B~^q_(i,j)` for `i = 0..=q`.
    pub tables: Vec<RationalMatrix>,
}

pub fn example_matrices(q: usize) -> Result<ExampleMatrices> {
    let knots_t = KnotVector::open(q, &presets::example_knots())?;
    let elevation = (0..=q).map(|i| degree_elevation_matrix(i, q)).collect::<Result<Vec<_>, _>>()?;
    let insertion = knot_insertion_matrix(&KnotVector::bezier(q), knots_t.interior_knots())?;
    let tables = (0..=q).map(|i| combined_row_coefficients(i, q, q, &knots_t)).collect::<Result<Vec<_>, _>>()?;
    Ok(ExampleMatrices { degree: q, knots_t, elevation, insertion, tables })
}

#[derive(Serialize)]
struct IndexedMatrix {
    i: usize,
    matrix: Vec<Vec<Num>>,
}

#[derive(Serialize)]
struct ExampleDocument {
    degree: usize,
    knots_t: Vec<Num>,
    elevation: Vec<IndexedMatrix>,
    insertion: Vec<Vec<Num>>,
    tables: Vec<IndexedMatrix>,
}

fn indexed(ms: &[RationalMatrix]) -> Vec<IndexedMatrix> {
    ms.iter().enumerate().map(|(i, m)| IndexedMatrix { i, matrix: matrix_json(m) }).collect()
}

pub fn example_text(ex: &ExampleMatrices) -> String {
    let q = ex.degree;
    let knots: Vec<String> = ex.knots_t.knots().iter().map(|k| Num::exact(k).0).collect();
    let mut out = format!("degree {q}\nknots_t {}\n", knots.join(" "));
    for (i, m) in ex.elevation.iter().enumerate() {
        out.push('\n');
        out.push_str(&fraction_table(&format!("E^{q}_{i}"), m));
    }
    out.push('\n');
    out.push_str(&fraction_table("K_t", &ex.insertion));
    for (i, m) in ex.tables.iter().enumerate() {
        out.push('\n');
        out.push_str(&fraction_table(&format!("B~^{q}_({i},j)"), m));
    }
    out
}

pub fn example_json(ex: &ExampleMatrices) -> Result<String> {
    let doc = ExampleDocument {
        degree: ex.degree,
        knots_t: ex.knots_t.knots().iter().map(Num::exact).collect(),
        elevation: indexed(&ex.elevation),
        insertion: matrix_json(&ex.insertion),
        tables: indexed(&ex.tables),
    };
    Ok(to_json_string(&doc)?)
}

fn patch_text(doc: &TrianglePatchDocument) -> String {
    let mut out = format!("degree {} type b\n", doc.degree);
    for p in &doc.points {
        let coords: Vec<&str> = p.coords.iter().map(|c| c.0.as_str()).collect();
        out.push_str(&format!("({},{}) {}\n", p.i, p.j, coords.join(" ")));
    }
    out
}

pub fn run(args: &ExamplesArgs) -> Result<Outcome> {
    let format = args.output.format.unwrap_or(Format::Text);
    let text = match args.name {
        ExampleName::Paper1 | ExampleName::Paper2 => {
            let ex = example_matrices(if args.name == ExampleName::Paper1 { 2 } else { 3 })?;
            match format {
                Format::Text => example_text(&ex),
                Format::Json => example_json(&ex)?,
                Format::Csv => bail!("examples support --format text or json"),
            }
        }
        ExampleName::Paper3 => {
            let w = match args.arc_weight {
                ArcWeightArg::Stated => ArcWeight::Stated,
                ArcWeightArg::Circular => ArcWeight::Circular,
            };
            let doc = TrianglePatchDocument::from_patch_b(&presets::example3_patch(w))?;
            match format {
                Format::Text => patch_text(&doc),
                Format::Json => to_json_string(&doc)?,
                Format::Csv => bail!("examples support --format text or json"),
            }
        }
    };
    emit(&args.output, &text)?;
    Ok(Outcome::Passed)
}
