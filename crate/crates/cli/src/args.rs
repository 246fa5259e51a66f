use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(
    name = "qsearch",
    version,
    about = "Quantum search simulation with partial inversion about average"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one search and report measured and predicted figures.
    Run(RunArgs),
    /// Run a grid of problem sizes and modes, one CSV row each.
    Sweep(SweepArgs),
    /// Print closed-form cost totals.
    Costs(CostsArgs),
    /// Check every fast operator against its dense matrix.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Standard,
    Improved,
}

impl From<ModeArg> for qsearch_core::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Standard => qsearch_core::Mode::Standard,
            ModeArg::Improved => qsearch_core::Mode::Improved,
        }
    }
}

/// `random` or a basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetArg {
    Random,
    Index(usize),
}

impl FromStr for TargetArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(TargetArg::Random);
        }
        s.parse()
            .map(TargetArg::Index)
            .map_err(|_| format!("expected `random` or an index, got {s:?}"))
    }
}

/// `auto` or a fixed count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepsArg {
    Auto,
    Fixed(u64),
}

impl FromStr for RepsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(RepsArg::Auto);
        }
        s.parse()
            .map(RepsArg::Fixed)
            .map_err(|_| format!("expected `auto` or a count, got {s:?}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    /// Number of equal contiguous sets (must divide n).
    #[arg(long, conflicts_with = "alpha")]
    pub eta: Option<usize>,
    /// Set size round(alpha * log2 n); must exceed 1.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Number of qubits.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "random")]
    pub target: TargetArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, default_value = "auto")]
    pub reps: RepsArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave the final application of U out of the reported ledger.
    #[arg(long)]
    pub paper_convention: bool,
    /// Record wall time in the report (makes reruns differ).
    #[arg(long)]
    pub timing: bool,
    /// Cost of one query in units of log2 N operations.
    #[arg(long, default_value_t = 1.0)]
    pub k_query: f64,
    /// Standard mode: inner standard steps inside U (0 = plain search).
    #[arg(long, default_value_t = 0)]
    pub inner_k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub n_step: usize,
    /// Comma-separated list of modes.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "standard,improved"
    )]
    pub modes: Vec<ModeArg>,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub k_query: f64,
    /// Leave the final application of U out of the simulated ledgers.
    #[arg(long)]
    pub paper_convention: bool,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CostsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub k_query: f64,
    #[arg(long, conflicts_with = "optimal", required_unless_present = "optimal")]
    pub alpha: Option<f64>,
    /// Use the alpha minimizing total operations.
    #[arg(long)]
    pub optimal: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest register checked (at most 8).
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Random states per operator instance, on top of every basis state.
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
