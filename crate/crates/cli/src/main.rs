use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dissect_core::extremal::{Mode, Sense};
use dissect_core::families::{Coords, FamilyKind};

mod commands;
mod report;
mod suites;

#[derive(Parser)]
#[command(name = "dissect", version, about = "Exact triangulations and dissections of convex polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Tri,
    Diss,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Tri => Mode::Triangulation,
            ModeArg::Diss => Mode::Dissection,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SenseArg {
    Min,
    Max,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Sense {
        match s {
            SenseArg::Min => Sense::Min,
            SenseArg::Max => Sense::Max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectArg {
    Triangulation,
    Dissection,
}

/// Explicit constructions `gen` can write next to the polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Placing triangulation in label order.
    Placing,
    PrismMin,
    PrismMaxPlacing,
    PrismMaxSplit,
    AntiprismMin,
    AntiprismMax,
    /// Seven tetrahedra of the trapezoid cube.
    Trapezoid7,
    /// The twelve-tetrahedron dissection of the lattice polytope.
    LatticeDissection,
    /// The eleven-tetrahedron triangulation of the lattice polytope.
    LatticeTriangulation,
    /// The m + 5 triangulation of P_m.
    PmSmall,
    /// The halving dissection of P_m along both maximal paths.
    PmHalvingMax,
    /// Both cones of the four-dimensional bipyramid.
    Bipyramid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Table1Rational,
    Table2Prisms,
    Table2Antiprisms,
    Prop23,
    PmGap,
}

#[derive(clap::Args)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_parser = parse_coords, default_value = "regular-approx")]
    pub coords: Coords,
    /// Polytope file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, requires = "simplices_out")]
    pub construction: Option<Construction>,
    /// Simplex file for the construction.
    #[arg(long)]
    pub simplices_out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct ValidateArgs {
    pub polytope: PathBuf,
    pub simplices: PathBuf,
    /// Exit with code 2 unless the family has this status.
    #[arg(long)]
    pub expect: Option<ExpectArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SolveArgs {
    pub polytope: PathBuf,
    #[arg(long)]
    pub mode: ModeArg,
    #[arg(long)]
    pub sense: SenseArg,
    /// Also list every optimal family.
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long, env = "DISSECT_NODE_BUDGET", default_value_t = 50_000_000)]
    pub node_budget: u64,
    /// Exit with code 2 unless the optimum equals this size.
    #[arg(long)]
    pub expect: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct TableArgs {
    pub suite: Suite,
    #[arg(long, env = "DISSECT_NODE_BUDGET", default_value_t = 50_000_000)]
    pub node_budget: u64,
    /// Largest polygon order for the prism and antiprism suites.
    #[arg(long, default_value_t = 8)]
    pub max_m: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a polytope and optionally one of its explicit constructions.
    Gen(GenArgs),
    /// Validate a simplex family on a polytope.
    Validate(ValidateArgs),
    /// Find a minimal or maximal triangulation or dissection.
    Solve(SolveArgs),
    /// Run a reproduction suite.
    Table(TableArgs),
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown family {s:?}"))
}

fn parse_coords(s: &str) -> Result<Coords, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown coordinates {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&argv, a),
        Command::Validate(a) => commands::validate(&argv, a),
        Command::Solve(a) => commands::solve(&argv, a),
        Command::Table(a) => commands::table(&argv, a),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
