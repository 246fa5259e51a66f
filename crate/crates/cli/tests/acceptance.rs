//! End-to-end acceptance checks, one line per criterion on stderr.
//!
//! Run with `cargo test -p qsearch-cli --test acceptance -- --nocapture`
//! to watch progress; the summary lines are written straight to stderr
//! either way.

use qsearch_core::costs::total_ops_objective;
use qsearch_core::diffusion::{grover_iteration, transform};
use qsearch_core::reference::{recurrence_uts, verify_equivalence, FastKernels, VerifyOptions};
use qsearch_core::{
    analytic_totals_improved, analytic_totals_standard, build_partition, measure_uts,
    optimal_alpha, predicted_uts_lower_bound, q_iteration_op_ratio, run, CostLedger, Mode,
    PartitionSpec, QubitSet, RunConfig, RunReport, StateVector,
};
use std::f64::consts::LN_2;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn sqrt_n(n: usize) -> f64 {
    (n as f64 / 2.0).exp2()
}

fn improved(n: usize, eta: usize) -> RunConfig {
    RunConfig::improved(n, PartitionSpec::ExplicitEta(eta)).with_seed(n as u64)
}

fn standard(n: usize) -> RunConfig {
    RunConfig::standard(n).with_seed(n as u64)
}

fn c1_oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let opts = VerifyOptions::default();
    let report = verify_equivalence(&opts, &FastKernels).map_err(|e| e.to_string())?;
    within(started.elapsed(), Duration::from_secs(60))?;
    let by_op = report.max_deviation_by_operator();
    ensure(by_op.len() == 9, || {
        format!("only {} operators covered", by_op.len())
    })?;
    let worst = by_op.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "n {}..={}, {} instances, max deviation {worst:.2e}, {:.2?}",
        opts.n_min,
        opts.n_max,
        report.operators.len(),
        started.elapsed()
    ))
}

fn c2_exact_small_case(reports: &mut Vec<RunReport>) -> Outcome {
    let mut slowest = Duration::ZERO;
    for t in 0..4 {
        let config = standard(2).with_target(t);
        let started = Instant::now();
        let r = run(&config).map_err(|e| e.to_string())?;
        slowest = slowest.max(started.elapsed());
        ensure(r.repetitions_used == 1, || {
            format!("t={t}: {} iterations", r.repetitions_used)
        })?;
        ensure((r.success_probability - 1.0).abs() <= 1e-12, || {
            format!("t={t}: success {}", r.success_probability)
        })?;
        reports.push(r);
    }
    within(slowest, Duration::from_millis(1))?;
    Ok(format!(
        "1 iteration, success 1 for every target, slowest run {slowest:.2?}"
    ))
}

fn c3_rotation_law(reports: &mut Vec<RunReport>) -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for n in [8, 12, 16] {
        let config = standard(n);
        let t = config.resolve_target().map_err(|e| e.to_string())?;
        let theta = sqrt_n(n).recip().asin();
        let report = run(&config).map_err(|e| e.to_string())?;
        let r = report.repetitions_used;

        let mut state = StateVector::zero(n).map_err(|e| e.to_string())?;
        let mut ledger = CostLedger::default();
        transform(&mut state, &QubitSet::full(n).unwrap(), &mut ledger).unwrap();
        for k in 0..=r {
            if k > 0 {
                grover_iteration(&mut state, t, &mut ledger).unwrap();
            }
            let expected = ((2 * k + 1) as f64 * theta).sin();
            worst = worst.max((state.amplitude_at(t).unwrap() - expected).abs());
        }
        let floor = 1.0 - 4.0 / (1u64 << n) as f64;
        ensure(report.success_probability >= floor, || {
            format!("n={n}: success {} < {floor}", report.success_probability)
        })?;
        reports.push(report);
    }
    ensure(worst <= 1e-10, || format!("amplitude deviation {worst:e}"))?;
    within(started.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "max amplitude deviation {worst:.2e}, success >= 1 - 4/N, {:.2?}",
        started.elapsed()
    ))
}

fn c4_uts_expansion() -> Outcome {
    let started = Instant::now();
    let mut worst_closed = 0.0f64;
    let mut worst_scaled = 0.0f64;
    for n in (8..=20).step_by(2) {
        let config = improved(n, 2);
        let uts = measure_uts(&config).map_err(|e| e.to_string())?;
        let b = sqrt_n(n);
        let closed = (5.0 - 12.0 / b + 8.0 / (b * b)) / b;
        let blocks = build_partition(n, PartitionSpec::ExplicitEta(2))
            .unwrap()
            .block_sizes();
        let rec = recurrence_uts(n, &blocks);
        worst_closed = worst_closed
            .max((uts - closed).abs())
            .max((rec - closed).abs());
        let big_n = b * b;
        let scaled = big_n.powf(1.5) * (uts - (5.0 / b - 12.0 / big_n)).abs();
        // 1e-12 on the amplitude, carried through the N^1.5 scaling.
        let tol = big_n.powf(1.5) * 1e-12;
        ensure((scaled - 8.0).abs() <= tol, || {
            format!("n={n}: N^1.5 |U_ts - (5/sqrt N - 12/N)| = {scaled}")
        })?;
        worst_scaled = worst_scaled.max((scaled - 8.0).abs());
    }
    ensure(worst_closed <= 1e-12, || {
        format!("closed-form deviation {worst_closed:e}")
    })?;
    within(started.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "max |U_ts - closed form| {worst_closed:.2e}, max |scaled residual - 8| {worst_scaled:.2e}, {:.2?}",
        started.elapsed()
    ))
}

fn c5_lower_bound() -> Outcome {
    let started = Instant::now();
    let mut parts = Vec::new();
    for (n, eta) in [(16, 2), (24, 2), (24, 3)] {
        let partition = build_partition(n, PartitionSpec::ExplicitEta(eta)).unwrap();
        let bound = predicted_uts_lower_bound(n, &partition).map_err(|e| e.to_string())?;
        let uts = measure_uts(&improved(n, eta)).map_err(|e| e.to_string())?;
        let alpha = partition.effective_alpha();
        ensure(uts >= bound, || {
            format!("n={n} eta={eta}: U_ts {uts} < bound {bound}")
        })?;
        parts.push(format!(
            "n={n} eta={eta} alpha={alpha:.3}{} U_ts*sqrtN {:.4} >= {:.4}",
            if alpha >= 2.0 { "" } else { " (alpha<2)" },
            uts * sqrt_n(n),
            bound * sqrt_n(n)
        ));
    }
    within(started.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{}, {:.2?}", parts.join("; "), started.elapsed()))
}

fn c6_extra_queries(reports: &mut Vec<RunReport>) -> Outcome {
    let started = Instant::now();
    let mut diffs = Vec::new();
    for n in (12..=20).step_by(2) {
        let s = run(&standard(n)).map_err(|e| e.to_string())?;
        let i = run(&improved(n, 2)).map_err(|e| e.to_string())?;
        ensure(s.target == i.target, || "targets differ".into())?;
        let d = i.ledger.queries() as i64 - s.ledger.queries() as i64;
        ensure((0..=4).contains(&d), || format!("n={n}: {d} extra queries"))?;
        diffs.push(format!("{n}:{d}"));
        reports.push(s);
        reports.push(i);
    }
    within(started.elapsed(), Duration::from_secs(180))?;
    Ok(format!(
        "extra queries by n [{}], {:.2?}",
        diffs.join(" "),
        started.elapsed()
    ))
}

fn c7_ledger_identities(reports: &[RunReport]) -> Outcome {
    for r in reports {
        let n = r.config.n_qubits as u64;
        let reps = r.repetitions_used;
        let (q, ops) = match r.config.mode {
            Mode::Standard => (reps, n + 3 * n * reps),
            Mode::Improved => {
                let eta = r.eta.unwrap() as u64;
                (reps * (2 * eta + 1) + eta, 9 * n * reps + 4 * n)
            }
        };
        ensure(
            r.ledger.queries() == q && r.ledger.nonquery_ops() == ops,
            || {
                format!(
                    "n={n} {}: ledger ({}, {}) != ({q}, {ops})",
                    r.config.mode,
                    r.ledger.queries(),
                    r.ledger.nonquery_ops()
                )
            },
        )?;
    }
    Ok(format!("{} runs match exactly", reports.len()))
}

fn c8_operations_ratio() -> Outcome {
    for n in [4, 8, 16, 20, 28] {
        let ratio = q_iteration_op_ratio(n, 2).map_err(|e| e.to_string())?;
        ensure(ratio == 0.6, || format!("n={n}: ratio {ratio}"))?;
    }
    let mut deltas = Vec::new();
    for n in [8, 12] {
        let imp = |reps| run(&improved(n, 2).with_repetitions(reps)).map(|r| r.ledger);
        let std2 = |reps| {
            run(&standard(n).with_inner_iterations(2).with_repetitions(reps)).map(|r| r.ledger)
        };
        let di = imp(4).unwrap() - imp(3).unwrap();
        let ds = std2(4).unwrap() - std2(3).unwrap();
        let n64 = n as u64;
        ensure(
            di.nonquery_ops() == 9 * n64 && ds.nonquery_ops() == 15 * n64,
            || {
                format!(
                    "n={n}: per-iteration deltas {} and {}",
                    di.nonquery_ops(),
                    ds.nonquery_ops()
                )
            },
        )?;
        ensure(di.queries() == ds.queries(), || {
            "query deltas differ".into()
        })?;
        deltas.push(format!(
            "n={n}: {}n vs {}n",
            di.nonquery_ops() / n64,
            ds.nonquery_ops() / n64
        ));
    }
    Ok(format!(
        "ratio 0.6 exactly; per-iteration deltas {}",
        deltas.join(", ")
    ))
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while b - a > 1e-10 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    (a + b) / 2.0
}

fn c9_optimum() -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for n in [8, 16, 32, 64] {
        for k in [0.5, 1.0, 4.0] {
            let closed = optimal_alpha(n, k).map_err(|e| e.to_string())?.alpha;
            let numeric = golden_section(|a| total_ops_objective(n, k, a), -4.0, 8.0);
            worst = worst.max((closed - numeric).abs());
        }
    }
    ensure(worst <= 1e-3, || {
        format!("closed form vs numeric {worst:e}")
    })?;
    let k_two = 4.0 / LN_2;
    let mut worst_two = 0.0f64;
    for n in [8, 16, 32, 64] {
        let a = optimal_alpha(n, k_two).map_err(|e| e.to_string())?.alpha;
        worst_two = worst_two.max((a - 2.0).abs());
    }
    ensure(worst_two <= 1e-9, || {
        format!("K = 4/ln2 gives alpha off by {worst_two:e}")
    })?;
    within(started.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "max |closed - golden section| {worst:.2e}, K=4/ln2 -> 2 within {worst_two:.1e}, {:.2?}",
        started.elapsed()
    ))
}

fn c10_asymptotic_ratio() -> Outcome {
    let n = 64;
    let std = analytic_totals_standard(n, 1.0).map_err(|e| e.to_string())?;
    let alpha = optimal_alpha(n, 1.0).map_err(|e| e.to_string())?.alpha;
    let at = |alpha: f64| -> Result<(f64, f64, f64), String> {
        let imp = analytic_totals_improved(n, alpha, 1.0).map_err(|e| e.to_string())?;
        let target = 3.0 / (2.0 * imp.eta.unwrap());
        let ratio = imp.nonquery_ops / std.nonquery_ops;
        let bounds = imp.bounds.unwrap();
        let bound_ratio = bounds.nonquery_ops / std.nonquery_ops;
        Ok((ratio, target, bound_ratio))
    };
    let (ratio, target, bound_ratio) = at(alpha)?;
    let rel = (ratio - target).abs() / target;
    ensure(rel <= 0.05, || {
        format!(
            "ratio {ratio:.4} vs 3/(2 eta) {target:.4}: {:.1}%",
            rel * 100.0
        )
    })?;
    ensure((bound_ratio - target).abs() <= 1e-12 * target, || {
        format!("bound ratio {bound_ratio} vs {target}")
    })?;
    let (r2, t2, _) = at(2.0)?;
    Ok(format!(
        "n=64 alpha={alpha:.4}: nonquery ratio {ratio:.4} vs 3/(2 eta) {target:.4} ({:.1}%); bound ratio exact; at alpha=2 {r2:.4} vs {t2:.4} ({:.1}%)",
        rel * 100.0,
        (r2 - t2).abs() / t2 * 100.0
    ))
}

fn c11_success(reports: &mut Vec<RunReport>) -> Outcome {
    let started = Instant::now();
    let mut worst = 1.0f64;
    let mut checked = 0;
    for r in reports.iter().filter(|r| r.config.mode == Mode::Improved) {
        worst = worst.min(r.success_probability);
        checked += 1;
    }
    for (n, eta) in [(16, 2), (24, 2), (24, 3)] {
        let r = run(&improved(n, eta)).map_err(|e| e.to_string())?;
        ensure(r.success_probability >= 0.99, || {
            format!("n={n} eta={eta}: success {}", r.success_probability)
        })?;
        worst = worst.min(r.success_probability);
        checked += 1;
        reports.push(r);
    }
    ensure(worst >= 0.99, || format!("lowest success {worst}"))?;
    Ok(format!(
        "{checked} improved runs, lowest success {worst:.6}, n=24 runs {:.1?}",
        started.elapsed()
    ))
}

fn qsearch(args: &[&str]) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_qsearch"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr))
    })
}

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = 0;
    for (name, args) in [
        (
            "run.json",
            &[
                "run", "--n", "16", "--mode", "improved", "--eta", "2", "--target", "random",
                "--seed", "7",
            ][..],
        ),
        (
            "sweep.csv",
            &[
                "sweep", "--n-min", "6", "--n-max", "14", "--n-step", "2", "--eta", "2", "--seed",
                "3",
            ],
        ),
    ] {
        let a = dir.path().join(format!("a_{name}"));
        let b = dir.path().join(format!("b_{name}"));
        for p in [&a, &b] {
            let mut full = args.to_vec();
            full.extend(["--out", p.to_str().unwrap()]);
            qsearch(&full)?;
        }
        let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        ensure(x == y, || format!("{name} differs between runs"))?;
        bytes += x.len();
    }
    Ok(format!(
        "JSON and CSV reruns byte-identical ({bytes} bytes compared)"
    ))
}

fn report(index: usize, title: &str, outcome: &Outcome) {
    let line = match outcome {
        Ok(detail) => format!("criterion {index:>2} PASS  {title}: {detail}"),
        Err(why) => format!("criterion {index:>2} FAIL  {title}: {why}"),
    };
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance_criteria() {
    // Start on a fresh line after the harness's `test ... ` prefix.
    let _ = writeln!(std::io::stderr());
    let mut runs = Vec::new();
    let mut outcomes = Vec::new();
    let mut record = |i: usize, title: &str, o: Outcome| {
        report(i, title, &o);
        outcomes.push(o.is_ok());
    };

    record(1, "oracle equivalence", c1_oracle_equivalence());
    record(2, "exact small case", c2_exact_small_case(&mut runs));
    record(3, "rotation law", c3_rotation_law(&mut runs));
    record(4, "U_ts expansion", c4_uts_expansion());
    record(5, "amplitude lower bound", c5_lower_bound());
    record(6, "extra queries", c6_extra_queries(&mut runs));
    // The n = 24 runs of criterion 11 are ledgered too, so run them first.
    let c11 = c11_success(&mut runs);
    record(7, "ledger identities", c7_ledger_identities(&runs));
    record(8, "operations ratio", c8_operations_ratio());
    record(9, "optimal alpha", c9_optimum());
    record(10, "asymptotic nonquery ratio", c10_asymptotic_ratio());
    record(11, "success probability", c11);
    record(12, "determinism", c12_determinism());

    let failed: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
