use crate::args::CostsArgs;
use crate::{usage, CliResult};
use qsearch_core::{
    analytic_totals_improved, analytic_totals_standard, optimal_alpha, reduction_factor,
    CostSummary,
};
use std::io::Write;

fn write_summary(out: &mut dyn Write, s: &CostSummary) -> std::io::Result<()> {
    writeln!(
        out,
        "{} (n = {}, K = {})",
        s.mode, s.n_qubits, s.query_cost_k
    )?;
    if let (Some(alpha), Some(eta)) = (s.alpha, s.eta) {
        writeln!(out, "  alpha            {alpha:.6}")?;
        writeln!(out, "  eta              {eta:.6}")?;
    }
    writeln!(out, "  repetitions      {:.6}", s.repetitions)?;
    writeln!(out, "  queries          {:.6}", s.queries)?;
    writeln!(out, "  nonquery ops     {:.6}", s.nonquery_ops)?;
    writeln!(out, "  total ops        {:.6}", s.total_ops)?;
    if let Some(b) = &s.breakdown {
        writeln!(
            out,
            "  nonquery split   U {:.6}, U† {:.6}, reflect about start {:.6}",
            b.u, b.u_dagger, b.reflect_start
        )?;
    }
    if let Some(b) = &s.bounds {
        writeln!(out, "  query bound      {:.6}", b.queries)?;
        writeln!(
            out,
            "  nonquery bound   {:.6}{}",
            b.nonquery_ops,
            if b.nonquery_bound_applies {
                ""
            } else {
                " (not guaranteed: alpha < 2)"
            }
        )?;
    }
    Ok(())
}

pub fn cmd_costs(a: &CostsArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.n < 4 {
        return usage(format!("--n must be at least 4, got {}", a.n));
    }
    if !(a.k_query > 0.0 && a.k_query.is_finite()) {
        return usage(format!("--k-query must be positive, got {}", a.k_query));
    }
    let alpha = match (a.alpha, a.optimal) {
        (Some(alpha), false) => {
            if !(alpha > 1.0 && alpha.is_finite()) {
                return usage(format!("--alpha must exceed 1, got {alpha}"));
            }
            alpha
        }
        (None, true) => {
            let opt = optimal_alpha(a.n, a.k_query)?;
            writeln!(
                out,
                "optimal alpha {:.6} (set size {:.4} qubits)",
                opt.alpha, opt.set_size
            )?;
            if opt.set_size_below_one {
                writeln!(out, "warning: optimal set size is below one qubit")?;
            }
            opt.alpha
        }
        _ => return usage("give exactly one of --alpha or --optimal"),
    };

    let standard = analytic_totals_standard(a.n, a.k_query)?;
    write_summary(out, &standard)?;
    if alpha <= 1.0 {
        writeln!(
            out,
            "warning: alpha {alpha:.6} <= 1 is outside the algorithm's range; no improved totals"
        )?;
    } else {
        let improved = analytic_totals_improved(a.n, alpha, a.k_query)?;
        write_summary(out, &improved)?;
        writeln!(
            out,
            "total ops ratio improved / standard {:.6}",
            improved.total_ops / standard.total_ops
        )?;
        if alpha < 2.0 {
            writeln!(
                out,
                "warning: alpha {alpha:.6} < 2, the amplitude and non-query bounds are not guaranteed"
            )?;
        }
    }
    writeln!(
        out,
        "reduction factor n / (3 log2 n) {:.4}",
        reduction_factor(a.n)?
    )?;
    Ok(())
}
