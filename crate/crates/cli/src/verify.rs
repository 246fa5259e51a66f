use crate::args::VerifyArgs;
use crate::{usage, CliError, CliResult};
use qsearch_core::reference::{
    verify_equivalence, EquivalenceReport, KernelSet, VerifyOptions, MAX_PRODUCT_QUBITS,
};
use std::io::Write;

pub fn verify_options(a: &VerifyArgs) -> CliResult<VerifyOptions> {
    if a.max_n > MAX_PRODUCT_QUBITS {
        return usage(format!(
            "--max-n {} exceeds the dense cap of {MAX_PRODUCT_QUBITS}",
            a.max_n
        ));
    }
    if a.max_n < 2 {
        return usage(format!("--max-n must be at least 2, got {}", a.max_n));
    }
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return usage(format!("--tol must be positive, got {}", a.tol));
    }
    Ok(VerifyOptions {
        n_min: 2,
        n_max: a.max_n,
        trials: a.trials,
        tolerance: a.tol,
        seed: a.seed,
    })
}

pub fn write_report(
    out: &mut dyn Write,
    report: &EquivalenceReport,
    tol: f64,
) -> std::io::Result<()> {
    writeln!(out, "{:<26} {:>12}", "operator", "max |dev|")?;
    for (op, dev) in report.max_deviation_by_operator() {
        writeln!(out, "{:<26} {:>12.3e}", op.name(), dev)?;
    }
    writeln!(
        out,
        "{:<26} {:>12.3e}",
        "uts_recurrence",
        report.max_recurrence_deviation()
    )?;
    writeln!(
        out,
        "{} operator instances, {} recurrence checks, all within {tol:.1e}",
        report.operators.len(),
        report.recurrence.len()
    )
}

/// Runs the equivalence suite on `kernels`. A failing operator yields
/// [`CliError::Failure`] whose message names it.
pub fn cmd_verify(a: &VerifyArgs, kernels: &dyn KernelSet, out: &mut dyn Write) -> CliResult<()> {
    let options = verify_options(a)?;
    let report =
        verify_equivalence(&options, kernels).map_err(|e| CliError::Failure(e.to_string()))?;
    write_report(out, &report, options.tolerance)?;
    Ok(())
}
