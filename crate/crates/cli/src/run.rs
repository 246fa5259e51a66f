use crate::args::{ModeArg, PartitionArgs, RepsArg, RunArgs, TargetArg};
use crate::{usage, CliResult};
use qsearch_core::{
    CostLedger, Mode, PartitionSpec, Predictions, Repetitions, RunConfig, RunReport, TargetSpec,
    MAX_QUBITS,
};
use serde::Serialize;
use std::io::Write;

/// Smallest register the CLI accepts.
pub const MIN_QUBITS: usize = 2;

pub(crate) fn partition_spec(mode: ModeArg, p: &PartitionArgs) -> CliResult<Option<PartitionSpec>> {
    match (mode, p.eta, p.alpha) {
        (ModeArg::Standard, None, None) => Ok(None),
        (ModeArg::Standard, _, _) => usage("--eta/--alpha apply to improved mode only"),
        (ModeArg::Improved, Some(eta), None) => Ok(Some(PartitionSpec::ExplicitEta(eta))),
        (ModeArg::Improved, None, Some(alpha)) => Ok(Some(PartitionSpec::Alpha(alpha))),
        (ModeArg::Improved, _, _) => usage("improved mode needs exactly one of --eta or --alpha"),
    }
}

pub(crate) fn check_qubits(n: usize) -> CliResult<()> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return usage(format!(
            "--n must lie in {MIN_QUBITS}..={MAX_QUBITS}, got {n}"
        ));
    }
    Ok(())
}

/// Validated core configuration for `run`.
pub fn run_config(a: &RunArgs) -> CliResult<RunConfig> {
    check_qubits(a.n)?;
    if a.inner_k > 0 && a.mode == ModeArg::Improved {
        return usage("--inner-k applies to standard mode only");
    }
    let config = RunConfig {
        n_qubits: a.n,
        target: match a.target {
            TargetArg::Random => TargetSpec::Random,
            TargetArg::Index(t) => TargetSpec::Index(t),
        },
        mode: a.mode.into(),
        partition: partition_spec(a.mode, &a.partition)?,
        repetitions: match a.reps {
            RepsArg::Auto => Repetitions::Auto,
            RepsArg::Fixed(r) => Repetitions::Fixed(r),
        },
        seed: a.seed,
        query_cost_k: a.k_query,
        inner_iterations: a.inner_k,
    };
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Serialize)]
pub struct ConfigJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_states: u64,
    pub mode: Mode,
    pub target: usize,
    pub target_spec: TargetSpec,
    pub partition: Option<PartitionSpec>,
    pub eta: Option<usize>,
    pub effective_alpha: Option<f64>,
    pub repetitions: Repetitions,
    pub seed: u64,
    pub k_query: f64,
    pub inner_k: usize,
    /// `"full"` or `"without_final_u"`.
    pub ledger_convention: &'static str,
}

/// The JSON document written by `run`.
#[derive(Debug, Serialize)]
pub struct RunJson {
    pub config: ConfigJson,
    pub measured_uts: f64,
    pub repetitions: u64,
    pub success_probability: f64,
    pub ledger: CostLedger,
    pub predicted: Predictions,
    /// Null unless `--timing` is given, so identical runs give identical bytes.
    pub wall_time_s: Option<f64>,
}

impl RunJson {
    pub fn new(report: RunReport, paper_convention: bool, timing: bool) -> Self {
        let c = &report.config;
        let final_u = report.ledger - report.ledger_paper_convention;
        let mut predicted = report.predicted;
        let ledger = if paper_convention {
            predicted.ledger_identity = predicted.ledger_identity - final_u;
            report.ledger_paper_convention
        } else {
            report.ledger
        };
        RunJson {
            config: ConfigJson {
                n: c.n_qubits,
                n_states: 1u64 << c.n_qubits,
                mode: c.mode,
                target: report.target,
                target_spec: c.target,
                partition: c.partition,
                eta: report.eta,
                effective_alpha: report.effective_alpha,
                repetitions: c.repetitions,
                seed: c.seed,
                k_query: c.query_cost_k,
                inner_k: c.inner_iterations,
                ledger_convention: if paper_convention {
                    "without_final_u"
                } else {
                    "full"
                },
            },
            measured_uts: report.measured_uts,
            repetitions: report.repetitions_used,
            success_probability: report.success_probability,
            ledger,
            predicted,
            wall_time_s: timing.then_some(report.wall_time_s),
        }
    }

    pub fn summary(&self) -> String {
        let c = &self.config;
        let part = match (c.eta, c.effective_alpha) {
            (Some(eta), Some(a)) => format!(" eta={eta} alpha={a:.4}"),
            _ => String::new(),
        };
        format!(
            "n={} mode={}{} target={} U_ts={:.6e} reps={} P(success)={:.6} queries={} nonquery={}",
            c.n,
            c.mode,
            part,
            c.target,
            self.measured_uts,
            self.repetitions,
            self.success_probability,
            self.ledger.queries(),
            self.ledger.nonquery_ops()
        )
    }
}

pub fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> CliResult<()> {
    let config = run_config(a)?;
    let report = qsearch_core::run(&config).map_err(|e| match e {
        qsearch_core::Error::InvalidArgument(m) => crate::CliError::Failure(m),
        other => other.into(),
    })?;
    let doc = RunJson::new(report, a.paper_convention, a.timing);
    let mut json = serde_json::to_string_pretty(&doc)?;
    json.push('\n');
    match &a.out {
        Some(path) => {
            std::fs::write(path, json)?;
            writeln!(out, "{}", doc.summary())?;
        }
        None => {
            out.write_all(json.as_bytes())?;
            eprintln!("{}", doc.summary());
        }
    }
    Ok(())
}
