use crate::args::{ModeArg, SweepArgs};
use crate::run::{check_qubits, partition_spec};
use crate::{usage, CliError, CliResult};
use qsearch_core::{
    analytic_totals_improved, analytic_totals_standard, Mode, Repetitions, RunConfig, TargetSpec,
};
use rayon::prelude::*;
use std::io::Write;

/// Column names, in order.
pub const HEADER: [&str; 14] = [
    "n",
    "N",
    "mode",
    "eta",
    "effective_alpha",
    "repetitions",
    "queries_sim",
    "queries_analytic",
    "nonquery_sim",
    "nonquery_analytic",
    "uts_measured",
    "uts_predicted",
    "success_probability",
    "seed",
];

/// One simulated configuration. Optional fields are written as empty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub n_states: u64,
    pub mode: Mode,
    pub eta: Option<usize>,
    pub effective_alpha: Option<f64>,
    pub repetitions: u64,
    pub queries_sim: u64,
    pub queries_analytic: Option<f64>,
    pub nonquery_sim: u64,
    pub nonquery_analytic: Option<f64>,
    pub uts_measured: f64,
    pub uts_predicted: f64,
    pub success_probability: f64,
    pub seed: u64,
}

/// Reals with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl SweepRow {
    pub fn record(&self) -> [String; 14] {
        [
            self.n.to_string(),
            self.n_states.to_string(),
            self.mode.to_string(),
            opt(self.eta, |e| e.to_string()),
            opt(self.effective_alpha, fmt_real),
            self.repetitions.to_string(),
            self.queries_sim.to_string(),
            opt(self.queries_analytic, fmt_real),
            self.nonquery_sim.to_string(),
            opt(self.nonquery_analytic, fmt_real),
            fmt_real(self.uts_measured),
            fmt_real(self.uts_predicted),
            fmt_real(self.success_probability),
            self.seed.to_string(),
        ]
    }
}

/// Every configuration of the sweep, ordered by (n, mode).
pub fn sweep_configs(a: &SweepArgs) -> CliResult<Vec<RunConfig>> {
    if a.n_step == 0 {
        return usage("--n-step must be positive");
    }
    if a.n_min > a.n_max {
        return usage(format!(
            "empty range: --n-min {} > --n-max {}",
            a.n_min, a.n_max
        ));
    }
    check_qubits(a.n_min)?;
    check_qubits(a.n_max)?;
    if a.modes.is_empty() {
        return usage("--modes is empty");
    }
    let mut modes = a.modes.clone();
    modes.sort_by_key(|m| *m as u8);
    modes.dedup();
    if !modes.contains(&ModeArg::Improved)
        && (a.partition.eta.is_some() || a.partition.alpha.is_some())
    {
        return usage("--eta/--alpha need improved in --modes");
    }

    let mut configs = Vec::new();
    for n in (a.n_min..=a.n_max).step_by(a.n_step) {
        for &mode in &modes {
            let config = RunConfig {
                n_qubits: n,
                target: TargetSpec::Random,
                mode: mode.into(),
                partition: match mode {
                    ModeArg::Standard => None,
                    ModeArg::Improved => partition_spec(mode, &a.partition)?,
                },
                repetitions: Repetitions::Auto,
                seed: a.seed,
                query_cost_k: a.k_query,
                inner_iterations: 0,
            };
            config
                .validate()
                .map_err(|e| CliError::Usage(format!("n = {n}, {mode:?}: {e}")))?;
            configs.push(config);
        }
    }
    Ok(configs)
}

pub fn sweep_row(config: &RunConfig, paper_convention: bool) -> CliResult<SweepRow> {
    let report = qsearch_core::run(config)?;
    let n = config.n_qubits;
    let ledger = if paper_convention {
        report.ledger_paper_convention
    } else {
        report.ledger
    };
    let analytic = match config.mode {
        Mode::Standard => analytic_totals_standard(n, config.query_cost_k).ok(),
        Mode::Improved => report
            .effective_alpha
            .and_then(|alpha| analytic_totals_improved(n, alpha, config.query_cost_k).ok()),
    };
    Ok(SweepRow {
        n,
        n_states: 1u64 << n,
        mode: config.mode,
        eta: report.eta,
        effective_alpha: report.effective_alpha,
        repetitions: report.repetitions_used,
        queries_sim: ledger.queries(),
        queries_analytic: analytic.as_ref().map(|s| s.queries),
        nonquery_sim: ledger.nonquery_ops(),
        nonquery_analytic: analytic.as_ref().map(|s| s.nonquery_ops),
        uts_measured: report.measured_uts,
        uts_predicted: report.predicted.uts,
        success_probability: report.success_probability,
        seed: config.seed,
    })
}

/// Runs the rows in parallel; the result keeps the order of `configs`.
pub fn run_sweep(configs: &[RunConfig], paper_convention: bool) -> CliResult<Vec<SweepRow>> {
    configs
        .par_iter()
        .map(|c| sweep_row(c, paper_convention))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> CliResult<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let configs = sweep_configs(a)?;
    let rows = run_sweep(&configs, a.paper_convention)?;
    match &a.out {
        Some(path) => {
            write_csv(&rows, std::fs::File::create(path)?)?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => write_csv(&rows, out)?,
    }
    Ok(())
}
