//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twogrid::{Grid1D, WeightSchedule};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "twogrid",
    version,
    about = "Two-grid and V-cycle analysis of 1D Poisson with scheduled weighted Jacobi"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a manufactured problem with V-cycles.
    Solve(SolveArgs),
    /// Closed-form two-grid spectrum, cross-checked against the assembled matrix.
    Spectrum(SpectrumArgs),
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Smoother eigenvalues of (2/3, 2/3) and (1, 1/2) as CSV and SVG.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rhs {
    /// f = π² sin(πx), u = sin(πx)
    Sine,
    /// f = 1, u = x(1 - x)/2
    One,
    /// Uniform random values in [-1, 1] from --seed
    Random,
}

fn parse_weights(s: &str) -> Result<WeightSchedule, String> {
    s.parse().map_err(|e: twogrid::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Grid points including boundaries; n - 1 must be a power of two.
    #[arg(long, default_value_t = 33)]
    pub n: usize,
    /// Comma-separated Jacobi weights, applied in order; p/q is accepted.
    #[arg(long, value_parser = parse_weights, default_value = "2/3")]
    pub weights: WeightSchedule,
    /// Relative residual target.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_cycles: usize,
    #[arg(long, value_enum, default_value_t = Rhs::Sine)]
    pub rhs: Rhs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Residual history file; stdout always gets the summary.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 33)]
    pub n: usize,
    #[arg(long, value_parser = parse_weights, default_value = "2/3")]
    pub weights: WeightSchedule,
    /// Report file; written to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Single grid size; defaults to 9, 17 and 33.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, default_value_t = 33)]
    pub n: usize,
    /// CSV path; the SVG is written next to it with an .svg extension.
    #[arg(long, default_value = "smoother_eigenvalues.csv")]
    pub output: PathBuf,
}

/// `n` odd and at least 5.
pub fn two_level_grid(n: usize) -> CliResult<Grid1D> {
    Grid1D::new(n).map_err(|e| CliError::Usage(format!("--n {n}: {e}")))
}

/// Additionally requires `n - 1` to be a power of two.
pub fn multilevel_grid(n: usize) -> CliResult<Grid1D> {
    let grid = two_level_grid(n)?;
    if !grid.is_fully_coarsenable() {
        return Err(CliError::Usage(format!(
            "--n {n}: multilevel commands need n - 1 to be a power of two"
        )));
    }
    Ok(grid)
}
