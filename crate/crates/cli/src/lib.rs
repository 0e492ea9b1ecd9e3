//! `dominance-lab`: empirical indices, tests, Monte Carlo tables and contour
//! grids from the command line.
//!
//! Every command produces one document: compact JSON tagged with
//! [`output::SCHEMA`], or CSV with a fixed header. Output depends only on the
//! arguments and the seed, never on the worker count.

mod commands;
pub mod input;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dominance_core::indices::IndexKind;
use dominance_core::inference::Method;
use dominance_core::simulation::AxisRange;

pub use commands::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("output: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] dominance_core::Error),
}

impl CliError {
    /// 2 for anything the caller can fix, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use dominance_core::Error as E;
        match self {
            CliError::Core(E::Singular(_) | E::Numerical(_)) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Design {
    /// π test design: σ ∈ {0.7, 1, 1.5}.
    Table1,
    /// γ test design: σ ∈ {1.1, 1.5, 2}.
    Table2,
}

#[derive(Debug, Parser)]
#[command(name = "dominance-lab", version, about = "Approximate stochastic dominance: indices, tests and simulations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "DOMINANCE_LAB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the document here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical π and γ indices of two samples.
    Index(IndexArgs),
    /// Test H0: index ≥ δ₀ against index < δ₀, with the upper confidence bound.
    Test(TestArgs),
    /// Monte Carlo rejection rates for N(0,1) against N(μ, σ²).
    Simulate(SimulateArgs),
    /// Closed-form index of N(0,1) against N(μ, σ²) over a grid.
    Contour(ContourArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Two single-column files (x then y), or one file with columns group,value.
    #[arg(required = true, num_args = 1..=2)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[command(flatten)]
    pub samples: SampleArgs,
    /// Also report the indices of the fitted normal laws.
    #[arg(long)]
    pub assume_normal: bool,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub samples: SampleArgs,
    #[arg(long, default_value = "pi")]
    pub index: IndexKind,
    #[arg(long)]
    pub delta0: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// lf | boot | plugin
    #[arg(long, default_value = "boot")]
    pub method: Method,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 200)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Apply the bootstrap bias correction to γ̂ as well.
    #[arg(long)]
    pub bias_correct_gamma: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Run a full rejection-rate table instead of a single cell.
    #[arg(long, value_enum, conflicts_with_all = ["mu", "sigma", "n", "m", "delta0", "index"])]
    pub design: Option<Design>,
    /// Sample sizes (n = m) for --design.
    #[arg(long, value_delimiter = ',', default_value = "100,1000")]
    pub sizes: Vec<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Defaults to n.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value = "pi")]
    pub index: IndexKind,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "boot")]
    pub method: Method,
    #[arg(long = "B", default_value_t = 200)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include wall-clock time per row (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[arg(long, default_value = "gamma")]
    pub index: IndexKind,
    /// start:end:count
    #[arg(long, allow_hyphen_values = true, default_value = "-2:2:41")]
    pub mu_range: AxisRange,
    /// start:end:count
    #[arg(long, default_value = "0.25:3:45")]
    pub sigma_range: AxisRange,
}
