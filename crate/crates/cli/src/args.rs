//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hsl", version, about = "Constants, kernels, Monte Carlo and Hardy-form checks for the stable process killed on the half-line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the constants at one point or along a beta grid.
    Constants(ConstantsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Monte Carlo estimation against closed-form targets.
    Simulate(SimulateArgs),
    /// Write a figure as CSV data and SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output format; defaults to csv for tables and json for reports.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include the wall time in the report (output is then not reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, conflicts_with = "beta_grid", required_unless_present = "beta_grid")]
    pub beta: Option<f64>,
    /// `start:stop:step`
    #[arg(long)]
    pub beta_grid: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Integrals,
    Identities,
    Green,
    Hardy,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// One value, a comma list or `start:stop:step`.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Evaluation points of the green suite.
    #[arg(long)]
    pub x: Option<String>,
    /// Interior `NxM` grid of the identities suite.
    #[arg(long)]
    pub grid: Option<String>,
    /// Test function of the hardy suite, e.g. `bump(2,1)`; default: the corpus.
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Occupation,
    Survival,
    ExitLaw,
    Groundstate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Euler,
    Richardson,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub task: Task,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Space-weight exponent (groundstate, weighted survival).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    /// Relative time step.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Survival time grid: `start:stop` (log-spaced) or `start:stop:step`.
    #[arg(long, default_value = "2:100")]
    pub t: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Richardson)]
    pub scheme: SchemeArg,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// beta -> kappa for several alpha
    Kappa,
    /// kappa against the whole-line constant
    Compare,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Comma list; default 0.5,1,1.5 (kappa) or 0.5 (compare).
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value = "0.01:0.99:0.01")]
    pub beta_grid: String,
    /// Path prefix of the `.csv` and `.svg` files; default: the figure name.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the report printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
