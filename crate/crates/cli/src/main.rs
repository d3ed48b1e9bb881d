mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gq_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "gq",
    version,
    about = "Quotient gradings of twisted group algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for the numeric oracle.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Eigenvalue clustering and residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    pub tol: f64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Catalog group name or group file.
    #[arg(long)]
    pub group: String,
    /// `trivial`, a catalog cocycle name or a cocycle file.
    #[arg(long)]
    pub cocycle: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure of a finite group.
    Group {
        #[arg(long)]
        group: String,
        /// Element list of a subgroup to test for normality.
        #[arg(long)]
        normal: Option<String>,
        /// Write the group table to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Cocycle checks: identity, non-degeneracy, restriction, comparison.
    Cocycle {
        #[command(flatten)]
        target: Target,
        /// Subgroup to restrict to.
        #[arg(long)]
        normal: Option<String>,
        /// A second cocycle to compare classes with.
        #[arg(long)]
        against: Option<String>,
        /// Write the cocycle table to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Wedderburn decomposition of the twisted group algebra.
    Twisted {
        #[command(flatten)]
        target: Target,
    },
    /// Grading class descriptors.
    Grading {
        #[arg(value_enum)]
        action: GradingAction,
        #[arg(long)]
        group: String,
        /// Descriptor file.
        #[arg(long)]
        descriptor: PathBuf,
        /// Second descriptor for `classify`.
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Mackey decomposition over a normal subgroup.
    Mackey {
        #[arg(value_enum)]
        action: MackeyAction,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        normal: String,
        /// Directory for the quotient group, its descriptor and twists.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Lagrangian subgroups and elementary quotients.
    Lagrangian {
        #[arg(value_enum)]
        action: LagrangianAction,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        normal: Option<String>,
        /// Restrict `scan` to normal subgroups.
        #[arg(long)]
        normal_only: bool,
    },
    /// Intrinsic fundamental group of the diagonal algebra.
    Pi1 {
        #[arg(value_enum)]
        action: Pi1Action,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=5))]
        n: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=12))]
        max_len: u64,
    },
    /// The acceptance battery over the catalog.
    Suite {
        /// Comma separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        #[arg(long)]
        sequential: bool,
        /// Largest group order in the reconstruction sweep.
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..=64))]
        max_order: u64,
    },
    /// Catalog listing and export.
    Catalog {
        #[arg(value_enum)]
        action: CatalogAction,
        /// Target directory for `write`.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum GradingAction {
    Dims,
    Connected,
    Equidim,
    Classify,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum MackeyAction {
    Decompose,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum LagrangianAction {
    Scan,
    Ecp,
    Maximal,
    Iyb,
    Minimal,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Pi1Action {
    Report,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum CatalogAction {
    List,
    Write,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Consistency and certification failures are check failures; the rest are input errors.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Consistency(_) | Error::Certification(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = report.render();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
