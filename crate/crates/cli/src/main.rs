use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod examples;

/// Exit status when a command ran but its check failed.
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_INPUT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "igs", version, about = "Smooth isogeometric spline spaces on singular patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree elevation and knot insertion matrices.
    Matrices(MatricesArgs),
    /// Smooth basis of a singular tensor-product space.
    BuildBasis(BuildArgs),
    /// Membership of splines in the smooth space.
    Membership(MembershipArgs),
    /// Grid of G, det ∇G and function values.
    Sample(SampleArgs),
    /// C^k limit check at the singular point.
    CheckSmoothness(CheckArgs),
    /// Reproduce a worked example.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    A,
    B,
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Interior knots are comma-separated rationals such as `1/4,1/2,3/4`.
#[derive(Args, Clone)]
pub struct SpaceArgs {
    #[arg(long)]
    pub degree_s: usize,
    #[arg(long)]
    pub degree_t: usize,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub knots_s: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub knots_t: String,
}

#[derive(Args)]
pub struct MatricesArgs {
    /// `E^Q_I` for elevating degree I to Q.
    #[arg(long, num_args = 2, value_names = ["I", "Q"])]
    pub elevate: Option<Vec<usize>>,
    /// Insertion matrix from the Bézier basis of degree `--degree-t` to the
    /// knots `--knots-t`.
    #[arg(long)]
    pub insert: bool,
    /// `E^q_I K_t`: coefficient rows of the smooth functions in tensor row I.
    #[arg(long, value_name = "I")]
    pub row: Option<usize>,
    #[arg(long)]
    pub degree_t: Option<usize>,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub knots_t: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub smooth_order: usize,
    #[arg(long = "type", value_enum, default_value = "a")]
    pub kind: Kind,
    /// Reject interior knots whose multiplicity breaks C^k of the standard
    /// space.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct MembershipArgs {
    /// Smooth-space document (every basis function is checked) or a single
    /// spline document.
    #[arg(long)]
    pub input: PathBuf,
    /// Required for spline documents; overrides the space document.
    #[arg(long)]
    pub smooth_order: Option<usize>,
    #[arg(long = "type", value_enum)]
    pub kind: Option<Kind>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Type-B patch with the arc weight as tabulated (√2).
    Paper3,
    /// Type-B patch with arc weight √2/2 (exact quarter circle).
    Paper3Circular,
    /// Exact type-A quarter-disk-style patch, bi-quadratic.
    QuarterDisk2,
    /// Exact type-A quarter-disk-style patch, bi-cubic.
    QuarterDisk3,
    /// Regular bilinear square.
    Square,
}

#[derive(Args, Clone)]
pub struct FunctionArgs {
    /// Geometry document with `g0`, `g1`, `g2`.
    #[arg(long, conflicts_with = "preset")]
    pub geometry: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Smooth-space document whose basis functions are used as `f`.
    #[arg(long, conflicts_with = "function")]
    pub space: Option<PathBuf>,
    /// Spline document used as `f`; repeatable.
    #[arg(long)]
    pub function: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "float")]
    pub mode: Mode,
}

#[derive(Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: FunctionArgs,
    /// Points per parameter direction.
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: FunctionArgs,
    #[arg(long)]
    pub smooth_order: usize,
    /// Per-path derivative traces as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    #[value(name = "paper-1")]
    Paper1,
    #[value(name = "paper-2")]
    Paper2,
    #[value(name = "paper-3")]
    Paper3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArcWeightArg {
    Stated,
    Circular,
}

#[derive(Args)]
pub struct ExamplesArgs {
    #[arg(value_enum)]
    pub name: ExampleName,
    /// Arc weight of the type-B patch.
    #[arg(long, value_enum, default_value = "stated")]
    pub arc_weight: ArcWeightArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Whether a command's own check passed.
pub enum Outcome {
    Passed,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Matrices(a) => commands::matrices(&a),
        Command::BuildBasis(a) => commands::build_basis(&a),
        Command::Membership(a) => commands::membership(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::CheckSmoothness(a) => commands::check_smoothness(&a),
        Command::Examples(a) => examples::run(&a),
    };
    match result {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
