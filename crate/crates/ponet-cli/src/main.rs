mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Possibilistic-necessity networks: joint tables, queries, and
/// transformations to and from weighted knowledge bases.
///
/// File kinds by extension: `.pnet` networks, `.pkb` knowledge-base sets,
/// `.pfnet` fuzzy networks. Data goes to stdout, diagnostics to stderr.
/// Exit codes: 0 success (or "true"), 1 "false" (equiv), 2 input error,
/// 3 constraint violation.
#[derive(Parser)]
#[command(name = "ponet", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    /// Possibility of the formula under the joint.
    Pi,
    /// Dual necessity: one minus the possibility of the negation.
    Ndual,
    /// Joint average read out over the models of the formula.
    Avg,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and check every constraint.
    Validate { file: PathBuf },
    /// Print the joint distribution of a network.
    Joint {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Measure a formula against a network's joint distribution.
    Query {
        file: PathBuf,
        /// Expression over literals with `!`, `&`, `|` and parentheses.
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum)]
        measure: Measure,
    },
    /// Compile a network into its per-node knowledge bases.
    ToKb {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a network from a knowledge-base set.
    FromKb {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compile, rebuild, and report which table cells survive.
    Roundtrip { file: PathBuf },
    /// Compare two knowledge-base sets for equivalence.
    Equiv { first: PathBuf, second: PathBuf },
    /// Remove subsumed formulas from every knowledge base.
    Normalize {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Replace fuzzy necessity entries by their defuzzified values.
    Defuzzify {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Joint { file, format } => commands::joint(&file, format),
        Command::Query {
            file,
            formula,
            measure,
        } => commands::query(&file, &formula, measure),
        Command::ToKb { file, out } => commands::to_kb(&file, out.as_deref()),
        Command::FromKb { file, out } => commands::from_kb(&file, out.as_deref()),
        Command::Roundtrip { file } => commands::roundtrip(&file),
        Command::Equiv { first, second } => commands::equiv(&first, &second),
        Command::Normalize { file, out } => commands::normalize(&file, out.as_deref()),
        Command::Defuzzify { file, out } => commands::defuzzify(&file, out.as_deref()),
    };
    ExitCode::from(code)
}
