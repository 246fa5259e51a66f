//! Front end for `qsearch`: single runs, sweeps over `n`, analytic cost
//! tables and the dense-matrix self check.
//!
//! Every command writes its human-readable output to a caller-supplied
//! writer and reports failure as a [`CliError`], whose
//! [`exit_code`](CliError::exit_code) is what the binary exits with.

pub mod args;
pub mod costs;
pub mod run;
pub mod sweep;
pub mod verify;

use std::fmt;
use std::io::Write;

pub use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent flags. Exit code 2.
    Usage(String),
    /// The command ran and failed. Exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qsearch_core::Error> for CliError {
    fn from(e: qsearch_core::Error) -> Self {
        match e {
            qsearch_core::Error::InvalidArgument(_) | qsearch_core::Error::ResourceLimit(_) => {
                CliError::Usage(e.to_string())
            }
            qsearch_core::Error::Equivalence { .. } => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(format!("json error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Runs one parsed command against the production kernels.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Run(a) => run::cmd_run(a, out),
        Command::Sweep(a) => sweep::cmd_sweep(a, out),
        Command::Costs(a) => costs::cmd_costs(a, out),
        Command::Verify(a) => verify::cmd_verify(a, &qsearch_core::reference::FastKernels, out),
    }
}

/// Sizes the global rayon pool from `GROVER_THREADS` when it is set.
pub fn configure_threads(value: Option<&str>) -> CliResult<()> {
    let Some(v) = value else {
        return Ok(());
    };
    let threads: usize = match v.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => {
            return usage(format!(
                "GROVER_THREADS must be a positive integer, got {v:?}"
            ))
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failure(format!("cannot size thread pool: {e}")))
}
