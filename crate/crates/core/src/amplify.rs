//! Amplitude amplification driver.
//!
//! Given a real operator `U` with transition amplitude `U_ts = <t|U|0>`,
//! repeating `I_s U† I_t U` (with `I_s` the zero-state inversion) `r` times
//! and finishing with one `U` leaves amplitude `±sin((2r + 1) theta)` on the
//! target, `theta = arcsin |U_ts|`.

use crate::costs::{
    analytic_totals_improved, analytic_totals_standard, cost_of_composite_u, cost_of_standard_u,
    CostLedger, CostSummary,
};
use crate::diffusion::{
    apply_composite_u, apply_composite_u_dagger, apply_standard_u, apply_standard_u_dagger,
    build_partition, composite_body, composite_body_dagger, grover_iteration, query, standard_body,
    standard_body_dagger, transform, transform_reflect_zero_transform, Partition, PartitionSpec,
};
use crate::error::{invalid, Result};
use crate::reference::recurrence_uts;
use crate::statevec::{QubitSet, StateVector, MAX_QUBITS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Improved,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Improved => "improved",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(Mode::Standard),
            "improved" => Ok(Mode::Improved),
            other => Err(format!(
                "unknown mode '{other}' (expected standard or improved)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetSpec {
    Index(usize),
    /// Drawn uniformly from `0..N` with a generator seeded from the run seed.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Repetitions {
    Auto,
    Fixed(u64),
}

/// Parameters of one search run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n_qubits: usize,
    pub target: TargetSpec,
    pub mode: Mode,
    /// Required in improved mode, ignored in standard mode.
    pub partition: Option<PartitionSpec>,
    pub repetitions: Repetitions,
    pub seed: u64,
    /// Cost of one query in units of `log2 N` qubit operations.
    pub query_cost_k: f64,
    /// Standard mode only: `U = W (D I_t)^k`. With `k = 0` the run is plain
    /// search (`W` then `r` standard steps); with `k > 0` the standard `U` is
    /// amplified exactly like the composite one.
    pub inner_iterations: usize,
}

impl RunConfig {
    pub fn standard(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            target: TargetSpec::Random,
            mode: Mode::Standard,
            partition: None,
            repetitions: Repetitions::Auto,
            seed: 0,
            query_cost_k: 1.0,
            inner_iterations: 0,
        }
    }

    pub fn improved(n_qubits: usize, partition: PartitionSpec) -> Self {
        Self {
            mode: Mode::Improved,
            partition: Some(partition),
            ..Self::standard(n_qubits)
        }
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = TargetSpec::Index(target);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_repetitions(mut self, reps: u64) -> Self {
        self.repetitions = Repetitions::Fixed(reps);
        self
    }

    pub fn with_inner_iterations(mut self, k: usize) -> Self {
        self.inner_iterations = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 1 || self.n_qubits > MAX_QUBITS {
            return invalid(format!("n = {} outside 1..={MAX_QUBITS}", self.n_qubits));
        }
        if let TargetSpec::Index(t) = self.target {
            if t >= 1usize << self.n_qubits {
                return invalid(format!("target {t} out of range for n = {}", self.n_qubits));
            }
        }
        if !(self.query_cost_k.is_finite() && self.query_cost_k >= 0.0) {
            return invalid(format!(
                "query cost K must be finite and >= 0, got {}",
                self.query_cost_k
            ));
        }
        match self.mode {
            Mode::Improved => {
                let spec = self.partition.ok_or_else(|| {
                    crate::Error::InvalidArgument("improved mode needs a partition".into())
                })?;
                build_partition(self.n_qubits, spec)?;
            }
            Mode::Standard => {}
        }
        Ok(())
    }

    /// The target index, drawing it from the seed when random.
    pub fn resolve_target(&self) -> Result<usize> {
        self.validate()?;
        Ok(match self.target {
            TargetSpec::Index(t) => t,
            TargetSpec::Random => {
                ChaCha8Rng::seed_from_u64(self.seed).random_range(0..1usize << self.n_qubits)
            }
        })
    }

    fn operator(&self) -> Result<SearchOperator> {
        self.validate()?;
        Ok(match self.mode {
            Mode::Standard => SearchOperator::Standard {
                n_qubits: self.n_qubits,
                inner_iterations: self.inner_iterations,
            },
            Mode::Improved => {
                let spec = self.partition.expect("validated");
                SearchOperator::Composite(build_partition(self.n_qubits, spec)?)
            }
        })
    }
}

/// The `U` being amplified.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOperator {
    Standard {
        n_qubits: usize,
        inner_iterations: usize,
    },
    Composite(Partition),
}

impl SearchOperator {
    pub fn apply(&self, s: &mut StateVector, t: usize, ledger: &mut CostLedger) -> Result<()> {
        match self {
            SearchOperator::Standard {
                inner_iterations, ..
            } => apply_standard_u(s, *inner_iterations, t, ledger),
            SearchOperator::Composite(p) => apply_composite_u(s, p, t, ledger),
        }
    }

    pub fn apply_dagger(
        &self,
        s: &mut StateVector,
        t: usize,
        ledger: &mut CostLedger,
    ) -> Result<()> {
        match self {
            SearchOperator::Standard {
                inner_iterations, ..
            } => apply_standard_u_dagger(s, *inner_iterations, t, ledger),
            SearchOperator::Composite(p) => apply_composite_u_dagger(s, p, t, ledger),
        }
    }

    fn apply_body(&self, s: &mut StateVector, t: usize, ledger: &mut CostLedger) -> Result<()> {
        match self {
            SearchOperator::Standard {
                inner_iterations, ..
            } => standard_body(s, *inner_iterations, t, ledger),
            SearchOperator::Composite(p) => composite_body(s, p, t, ledger, |_, _| {}),
        }
    }

    fn apply_body_dagger(
        &self,
        s: &mut StateVector,
        t: usize,
        ledger: &mut CostLedger,
    ) -> Result<()> {
        match self {
            SearchOperator::Standard {
                inner_iterations, ..
            } => standard_body_dagger(s, *inner_iterations, t, ledger),
            SearchOperator::Composite(p) => composite_body_dagger(s, p, t, ledger),
        }
    }

    /// Ledger cost of one application of `U` (equal to that of `U†`).
    pub fn cost(&self) -> CostLedger {
        match self {
            SearchOperator::Standard {
                n_qubits,
                inner_iterations,
            } => cost_of_standard_u(*n_qubits, *inner_iterations),
            SearchOperator::Composite(p) => cost_of_composite_u(p),
        }
    }
}

/// `<t|U|0>` for the configured mode's `U`, by simulation.
pub fn measure_uts(config: &RunConfig) -> Result<f64> {
    let op = config.operator()?;
    let t = config.resolve_target()?;
    uts_of(&op, config.n_qubits, t)
}

fn uts_of(op: &SearchOperator, n_qubits: usize, target: usize) -> Result<f64> {
    let mut state = StateVector::zero(n_qubits)?;
    op.apply(&mut state, target, &mut CostLedger::default())?;
    state.amplitude_at(target)
}

/// The repetition count maximizing `sin^2((2r + 1) theta)`,
/// `theta = arcsin |U_ts|`: `max(0, round(pi / (4 theta) - 1/2))`.
pub fn optimal_repetitions(uts_magnitude: f64) -> Result<u64> {
    if !(uts_magnitude > 0.0 && uts_magnitude <= 1.0) {
        return invalid(format!("|U_ts| must lie in (0, 1], got {uts_magnitude}"));
    }
    let theta = uts_magnitude.asin();
    Ok((PI / (4.0 * theta) - 0.5).round().max(0.0) as u64)
}

/// Guaranteed `U_ts` for the composite operator started from `|0>`:
/// `(2 eta (1 - (log2 N)^(1 - alpha)) + 1) / sqrt(N)`, using the partition's
/// effective alpha. Requires equal-size sets.
pub fn predicted_uts_lower_bound(n_qubits: usize, partition: &Partition) -> Result<f64> {
    if partition.n_qubits() != n_qubits {
        return invalid(format!(
            "partition is for {} qubits, not {n_qubits}",
            partition.n_qubits()
        ));
    }
    if !partition.is_equal_size() {
        return invalid("the amplitude bound needs equal-size sets");
    }
    let n = n_qubits as f64;
    let eta = partition.eta() as f64;
    let eps = n.powf(1.0 - partition.effective_alpha());
    Ok((2.0 * eta * (1.0 - eps) + 1.0) / (n / 2.0).exp2())
}

/// Analytic counterparts reported next to the simulated values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Predictions {
    /// Closed-form `U_ts`: `sin((2k + 1) arcsin N^-1/2)` for the standard `U`,
    /// the block recurrence for the composite `U`.
    pub uts: f64,
    /// Improved mode with equal-size sets only.
    pub uts_lower_bound: Option<f64>,
    /// Whether the partition's effective alpha is at least 2.
    pub alpha_at_least_two: Option<bool>,
    pub repetitions: u64,
    pub success_probability: f64,
    /// Exact ledger implied by `repetitions_used`, including the final `U`.
    pub ledger_identity: CostLedger,
    /// Real-valued totals from the closed-form cost model; absent when the
    /// model is undefined (alpha <= 1 or n < 4 in improved mode).
    pub analytic: Option<CostSummary>,
}

/// Everything measured and predicted for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub target: usize,
    pub eta: Option<usize>,
    pub effective_alpha: Option<f64>,
    pub measured_uts: f64,
    pub repetitions_used: u64,
    pub success_probability: f64,
    /// Every operation executed, including the final `U` (or leading `W`).
    pub ledger: CostLedger,
    /// `ledger` without the final `U` (standard mode: without the leading `W`).
    pub ledger_paper_convention: CostLedger,
    pub predicted: Predictions,
    pub wall_time_s: f64,
}

/// Runs the configured search end to end on a state vector.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let started = Instant::now();
    let op = config.operator()?;
    let n = config.n_qubits;
    let t = config.resolve_target()?;
    let measured_uts = uts_of(&op, n, t)?;

    let plain_standard = matches!(
        op,
        SearchOperator::Standard {
            inner_iterations: 0,
            ..
        }
    );
    let reps = match config.repetitions {
        Repetitions::Fixed(r) => r,
        Repetitions::Auto if plain_standard => {
            optimal_repetitions(((1usize << n) as f64).sqrt().recip())?
        }
        Repetitions::Auto => optimal_repetitions(measured_uts.abs())?,
    };

    let mut state = StateVector::zero(n)?;
    let mut ledger = CostLedger::default();
    let full = QubitSet::full(n)?;
    if plain_standard {
        transform(&mut state, &full, &mut ledger)?;
        for _ in 0..reps {
            grover_iteration(&mut state, t, &mut ledger)?;
        }
    } else {
        // U (I_t U† I_s U)^r, with each W I_s W between a U† and the next U
        // executed as a single reflection about the uniform state.
        op.apply(&mut state, t, &mut ledger)?;
        for _ in 0..reps {
            query(&mut state, t, &mut ledger)?;
            op.apply_body_dagger(&mut state, t, &mut ledger)?;
            transform_reflect_zero_transform(&mut state, &mut ledger)?;
            op.apply_body(&mut state, t, &mut ledger)?;
        }
    }
    let success_probability = state.success_probability(t)?.min(1.0);
    let final_u = op.cost();
    let ledger_paper_convention = ledger - final_u;
    let predicted = predictions(config, &op, reps)?;
    let (eta, effective_alpha) = match &op {
        SearchOperator::Composite(p) => (Some(p.eta()), Some(p.effective_alpha())),
        SearchOperator::Standard { .. } => (None, None),
    };

    Ok(RunReport {
        config: config.clone(),
        target: t,
        eta,
        effective_alpha,
        measured_uts,
        repetitions_used: reps,
        success_probability,
        ledger,
        ledger_paper_convention,
        predicted,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

fn predictions(config: &RunConfig, op: &SearchOperator, reps_used: u64) -> Result<Predictions> {
    let n = config.n_qubits;
    let n_states = (1usize << n) as f64;
    let k = config.query_cost_k;
    Ok(match op {
        SearchOperator::Standard {
            inner_iterations, ..
        } => {
            let theta = n_states.sqrt().recip().asin();
            let uts = ((2 * inner_iterations + 1) as f64 * theta).sin();
            let repetitions = optimal_repetitions(uts.abs())?;
            let per_u = op.cost();
            let ledger_identity = if *inner_iterations == 0 {
                // W, then r standard steps
                CostLedger::new(reps_used, n as u64 + 3 * n as u64 * reps_used)
            } else {
                amplified_identity(per_u, n, reps_used)
            };
            Predictions {
                uts,
                uts_lower_bound: None,
                alpha_at_least_two: None,
                repetitions,
                success_probability: amplified_success(uts, repetitions),
                ledger_identity,
                analytic: Some(analytic_totals_standard(n, k)?),
            }
        }
        SearchOperator::Composite(p) => {
            let uts = recurrence_uts(n, &p.block_sizes());
            let repetitions = optimal_repetitions(uts.abs())?;
            let alpha = p.effective_alpha();
            Predictions {
                uts,
                uts_lower_bound: predicted_uts_lower_bound(n, p).ok(),
                alpha_at_least_two: Some(alpha >= 2.0),
                repetitions,
                success_probability: amplified_success(uts, repetitions),
                ledger_identity: amplified_identity(op.cost(), n, reps_used),
                analytic: analytic_totals_improved(n, alpha, k).ok(),
            }
        }
    })
}

// r * (U + I_t + U† + I_s) + U
fn amplified_identity(per_u: CostLedger, n: usize, reps: u64) -> CostLedger {
    CostLedger::new(
        reps * (2 * per_u.queries() + 1) + per_u.queries(),
        reps * (2 * per_u.nonquery_ops() + n as u64) + per_u.nonquery_ops(),
    )
}

fn amplified_success(uts: f64, reps: u64) -> f64 {
    let theta = uts.abs().min(1.0).asin();
    ((2 * reps + 1) as f64 * theta).sin().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimal_repetition_examples() {
        assert_eq!(optimal_repetitions(0.5).unwrap(), 1);
        assert_eq!(optimal_repetitions(1.0).unwrap(), 0);
        let r = optimal_repetitions(1.0 / 32.0).unwrap();
        assert_eq!(r, 25);
        let theta = (1.0f64 / 32.0).asin();
        assert!(((2 * r + 1) as f64 * theta).sin().powi(2) >= 0.999);
        assert!(optimal_repetitions(0.0).is_err());
        assert!(optimal_repetitions(-0.1).is_err());
        assert!(optimal_repetitions(1.5).is_err());
        assert!(optimal_repetitions(f64::NAN).is_err());
    }

    #[test]
    fn rounding_rule_is_argmax() {
        for i in 1..2000 {
            let uts = i as f64 / 2000.0;
            let r = optimal_repetitions(uts).unwrap();
            let p = |r: u64| amplified_success(uts, r);
            assert!(p(r) >= p(r + 1) - 1e-15, "uts={uts}");
            if r > 0 {
                assert!(p(r) >= p(r - 1) - 1e-15, "uts={uts}");
            }
        }
    }

    #[test]
    fn measure_uts_examples() {
        let cfg = RunConfig::standard(10)
            .with_inner_iterations(2)
            .with_target(7);
        let expected = (5.0 * (1.0f64 / 32.0).asin()).sin();
        assert!((measure_uts(&cfg).unwrap() - expected).abs() <= 1e-12);

        let cfg = RunConfig::improved(8, PartitionSpec::ExplicitEta(2)).with_target(200);
        assert!((measure_uts(&cfg).unwrap() - 0.267_578_125).abs() <= 1e-12);

        let one = RunConfig::improved(4, PartitionSpec::ExplicitEta(1)).with_target(3);
        let std1 = RunConfig::standard(4)
            .with_inner_iterations(1)
            .with_target(3);
        assert!((measure_uts(&one).unwrap() - measure_uts(&std1).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::standard(0).validate().is_err());
        assert!(RunConfig::standard(29).validate().is_err());
        assert!(RunConfig::standard(3).with_target(8).validate().is_err());
        let mut cfg = RunConfig::improved(16, PartitionSpec::ExplicitEta(3));
        assert!(cfg.validate().is_err());
        cfg.partition = None;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::standard(4);
        cfg.query_cost_k = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn random_target_is_seeded() {
        let a = RunConfig::standard(16)
            .with_seed(7)
            .resolve_target()
            .unwrap();
        let b = RunConfig::standard(16)
            .with_seed(7)
            .resolve_target()
            .unwrap();
        let c = RunConfig::standard(16)
            .with_seed(8)
            .resolve_target()
            .unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a < 1 << 16);
    }

    #[test]
    fn standard_n2_is_exact() {
        let report = run(&RunConfig::standard(2).with_target(2)).unwrap();
        assert_eq!(report.repetitions_used, 1);
        assert!((report.success_probability - 1.0).abs() <= 1e-12);
        assert_eq!(report.ledger, CostLedger::new(1, 2 + 6));
        assert_eq!(report.ledger_paper_convention, CostLedger::new(1, 6));
    }

    #[test]
    fn standard_n16_auto() {
        let report = run(&RunConfig::standard(16).with_target(40000)).unwrap();
        assert_eq!(report.repetitions_used, 201);
        assert!(report.success_probability >= 0.9999);
        assert_eq!(report.ledger, report.predicted.ledger_identity);
    }

    #[test]
    fn improved_n16_eta2_auto() {
        let report =
            run(&RunConfig::improved(16, PartitionSpec::ExplicitEta(2)).with_seed(3)).unwrap();
        assert!(report.success_probability >= 0.99);
        let q = report.ledger.queries();
        assert!((201..=205).contains(&q), "queries {q}");
        let r = report.repetitions_used;
        assert_eq!(report.ledger, CostLedger::new(r * 5 + 2, 9 * 16 * r + 64));
        assert_eq!(report.ledger, report.predicted.ledger_identity);
        assert_eq!(
            report.ledger_paper_convention,
            CostLedger::new(r * 5, 9 * 16 * r)
        );
        let bound = report.predicted.uts_lower_bound.unwrap();
        assert!((bound - 4.75 / 256.0).abs() <= 1e-15);
        assert!(report.measured_uts >= bound);
        assert!((report.measured_uts - report.predicted.uts).abs() <= 1e-12);
    }

    #[test]
    fn lower_bound_examples() {
        let p = build_partition(16, PartitionSpec::ExplicitEta(2)).unwrap();
        let b = predicted_uts_lower_bound(16, &p).unwrap();
        assert!((b - 0.018_554_687_5).abs() <= 1e-12);
        assert!(predicted_uts_lower_bound(12, &p).is_err());
        let uneven = build_partition(10, PartitionSpec::Alpha(1.2)).unwrap();
        assert!(predicted_uts_lower_bound(10, &uneven).is_err());
        // one full block with large alpha tends to 3 / sqrt(N)
        let single = build_partition(20, PartitionSpec::ExplicitEta(1)).unwrap();
        let b = predicted_uts_lower_bound(20, &single).unwrap();
        assert!((b * 1024.0 - 3.0).abs() < 1e-3);
    }

    #[test]
    fn amplification_is_linear_for_small_angles() {
        let cfg = RunConfig::improved(16, PartitionSpec::ExplicitEta(2)).with_target(77);
        let uts = measure_uts(&cfg).unwrap();
        for r in 0..=5u64 {
            assert!(r as f64 * uts <= 0.1);
            let report = run(&cfg.clone().with_repetitions(r)).unwrap();
            let amp = report.success_probability.sqrt();
            let linear = (2 * r + 1) as f64 * uts;
            assert!((amp - linear).abs() <= 0.1 * linear, "r={r}");
        }
    }

    #[test]
    fn success_is_maximal_at_auto_repetitions() {
        for cfg in [
            RunConfig::standard(10).with_target(5),
            RunConfig::improved(10, PartitionSpec::ExplicitEta(2)).with_target(5),
            RunConfig::improved(12, PartitionSpec::ExplicitEta(3)).with_target(1000),
        ] {
            let auto = run(&cfg).unwrap();
            let r = auto.repetitions_used;
            for other in [r - 1, r + 1] {
                let rep = run(&cfg.clone().with_repetitions(other)).unwrap();
                assert!(auto.success_probability >= rep.success_probability);
            }
        }
    }
}
