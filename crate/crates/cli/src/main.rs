//! `liexp`: batch driver for expansion pipelines, invariant tensors and
//! Chern–Simons Lagrangians.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "liexp", version, about = "Semigroup expansions of Lie algebras and their Chern-Simons forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the expansion steps of a pipeline and print the commutator table.
    Expand(RunArgs),
    /// Lift the invariant tensor of a pipeline and verify it.
    Invariants(RunArgs),
    /// Build the Chern-Simons Lagrangian of a pipeline and run its comparisons.
    Lagrangian(LagrangianArgs),
    /// Construct, verify or compare semigroups.
    #[command(subcommand)]
    Semigroup(SemigroupCommand),
    /// Check axioms of an algebra file, and invariance of a tensor file under it.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct Source {
    /// Pipeline config (JSON).
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    config: Option<PathBuf>,
    /// Built-in pipeline by name: lorentz, b5, c3, c3_paired, c5, c5_lovelock.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args, Debug)]
struct Output {
    /// Directory for output files; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct LagrangianArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    /// Extra golden (registry name or `.target` file) compared against the full form modulo exact forms.
    #[arg(long)]
    compare: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum SemigroupCommand {
    /// Emit the table of a named semigroup (`Z4`, `D4`, `SE3`, `Z2 x Z2`, ...).
    Construct {
        name: String,
        #[command(flatten)]
        output: Output,
    },
    /// Validate a semigroup JSON file.
    Verify { file: PathBuf },
    /// Search for an isomorphism between two semigroups (names or JSON files).
    Isomorphism { first: String, second: String },
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Algebra JSON file or fixture name.
    #[arg(long)]
    algebra: String,
    /// Invariant tensor JSON file.
    #[arg(long)]
    tensor: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand(a) => commands::expand(&a.source, &a.output),
        Command::Invariants(a) => commands::invariants(&a.source, &a.output),
        Command::Lagrangian(a) => commands::lagrangian(&a.source, &a.output, &a.compare),
        Command::Semigroup(c) => commands::semigroup(c),
        Command::Check(a) => commands::check(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
