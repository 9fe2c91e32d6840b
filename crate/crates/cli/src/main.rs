//! `crn`: conservation laws, cuts and linear elimination for reaction networks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "crn", version, about = "Exact linear elimination for mass-action reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct Selection {
    /// Comma-separated species, or `all-noninteracting`.
    #[arg(long)]
    subset: String,
    /// Names the total amount of a cut component, e.g. `w1=S1,S4,S5,S6`.
    #[arg(long = "total", value_name = "NAME=SPECIES")]
    totals: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a network and print it back in canonical form.
    Parse { file: PathBuf },
    /// Semiflow basis, strictly positive semiflows and minimal P-semiflows.
    Semiflows {
        file: PathBuf,
        /// Report a strictly positive semiflow if one exists.
        #[arg(long)]
        positive: bool,
        /// Report all minimal P-semiflows.
        #[arg(long)]
        minimal: bool,
    },
    /// Classify a subset as full, non-interacting and cut.
    Classify {
        file: PathBuf,
        #[arg(long)]
        subset: String,
    },
    /// Species graph of the network or of a subset.
    Graph {
        file: PathBuf,
        #[arg(long)]
        subset: Option<String>,
        /// Also write the graph in DOT form to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Show the elimination graphs of the subset's components instead.
        #[arg(long, requires = "subset")]
        elimination: bool,
    },
    /// Eliminate the concentrations of a non-interacting subset.
    Eliminate {
        file: PathBuf,
        #[command(flatten)]
        selection: Selection,
    },
    /// Reduced steady-state system in the remaining variables.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        selection: Selection,
    },
    /// Check the elimination exactly at a random positive point.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        selection: Selection,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixes a symbol's value, e.g. `k_r1=3/2` or `w1=5`.
        #[arg(long = "assign", value_name = "SYMBOL=VALUE")]
        assign: Vec<String>,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// The network or subset does not admit the requested operation.
    Domain(anyhow::Error),
    /// Unreadable input or invalid options.
    Config(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Config(_) => 2,
        }
    }
}

pub type Outcome = Result<String, (Option<String>, Failure)>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let color = std::env::var("CRN_COLOR").is_ok_and(|v| v == "1") && cli.format == Format::Text;
    let style = commands::Style { format: cli.format, color };
    let out = match cli.command {
        Command::Parse { file } => commands::parse(&file, style),
        Command::Semiflows { file, positive, minimal } => commands::semiflows(&file, positive, minimal, style),
        Command::Classify { file, subset } => commands::classify(&file, &subset, style),
        Command::Graph { file, subset, dot, elimination } => {
            commands::graph(&file, subset.as_deref(), dot.as_deref(), elimination, style)
        }
        Command::Eliminate { file, selection } => commands::eliminate(&file, &selection, style),
        Command::Reduce { file, selection } => commands::reduce(&file, &selection, style),
        Command::Validate { file, selection, seed, assign } => {
            commands::validate(&file, &selection, seed, &assign, style)
        }
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((report, failure)) => {
            if let Some(r) = report {
                print!("{r}");
            }
            let (Failure::Domain(e) | Failure::Config(e)) = &failure;
            eprintln!("error: {e:#}");
            ExitCode::from(failure.code())
        }
    }
}
