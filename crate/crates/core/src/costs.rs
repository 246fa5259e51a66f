//! Operation counting: the per-run ledger and the closed-form totals used to
//! compare standard search against the partial-diffusion variant.
//!
//! Counting convention: a query is one application of the target phase flip
//! `I_t`. Every other primitive costs one unit per qubit it touches: a
//! Walsh-Hadamard on `S` costs `|S|`, a zero-state inversion on `S` costs
//! `|S|`, so a (partial) inversion about average on `S` costs `3|S|`.
//! Simulated ledgers are integers; analytic totals are unrounded reals.

use crate::amplify::Mode;
use crate::diffusion::Partition;
use crate::error::{invalid, Result};
use serde::Serialize;
use std::f64::consts::{LN_2, PI};
use std::ops::{Add, AddAssign, Sub};

/// Query and non-query operation counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CostLedger {
    queries: u64,
    nonquery_ops: u64,
}

impl CostLedger {
    pub const fn new(queries: u64, nonquery_ops: u64) -> Self {
        Self {
            queries,
            nonquery_ops,
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn nonquery_ops(&self) -> u64 {
        self.nonquery_ops
    }

    pub fn record_query(&mut self) {
        self.queries += 1;
    }

    pub fn record_ops(&mut self, ops: usize) {
        self.nonquery_ops += ops as u64;
    }

    /// `K * n * queries + nonquery_ops`: the total when one query costs
    /// `K log2 N` qubit operations.
    pub fn total_ops(&self, n_qubits: usize, query_cost_k: f64) -> f64 {
        query_cost_k * n_qubits as f64 * self.queries as f64 + self.nonquery_ops as f64
    }
}

impl Add for CostLedger {
    type Output = CostLedger;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.queries + rhs.queries,
            self.nonquery_ops + rhs.nonquery_ops,
        )
    }
}

impl AddAssign for CostLedger {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for CostLedger {
    type Output = CostLedger;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.queries - rhs.queries,
            self.nonquery_ops - rhs.nonquery_ops,
        )
    }
}

/// Cost of one composite `U` (or `U†`): `eta` queries and
/// `n + 3 * sum(|S_i|)` other operations, which is `4n` for a covering partition.
pub fn cost_of_composite_u(partition: &Partition) -> CostLedger {
    let set_ops: usize = partition.sets().iter().map(|s| 3 * s.len()).sum();
    CostLedger::new(
        partition.eta() as u64,
        (partition.n_qubits() + set_ops) as u64,
    )
}

/// Cost of one standard iteration: one query plus a full inversion about average.
pub fn cost_of_grover_iteration(n_qubits: usize) -> CostLedger {
    CostLedger::new(1, 3 * n_qubits as u64)
}

/// Cost of the standard `U = W (D I_t)^k` (or its adjoint).
pub fn cost_of_standard_u(n_qubits: usize, inner_iterations: usize) -> CostLedger {
    let n = n_qubits as u64;
    let k = inner_iterations as u64;
    CostLedger::new(k, n + 3 * n * k)
}

/// The three non-query contributions of an amplified run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonqueryBreakdown {
    pub u: f64,
    pub u_dagger: f64,
    pub reflect_start: f64,
}

/// Closed-form upper bounds on the improved algorithm's totals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImprovedBounds {
    pub queries: f64,
    pub nonquery_ops: f64,
    /// The non-query bound is only claimed for `alpha >= 2`.
    pub nonquery_bound_applies: bool,
}

/// Analytic totals for one algorithm at one problem size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostSummary {
    pub mode: Mode,
    pub n_qubits: usize,
    pub query_cost_k: f64,
    pub alpha: Option<f64>,
    pub eta: Option<f64>,
    /// Amplification repetitions (real-valued).
    pub repetitions: f64,
    pub queries: f64,
    pub nonquery_ops: f64,
    pub total_ops: f64,
    pub breakdown: Option<NonqueryBreakdown>,
    pub bounds: Option<ImprovedBounds>,
}

fn sqrt_n_states(n_qubits: usize) -> f64 {
    (n_qubits as f64 / 2.0).exp2()
}

/// Standard search: `pi sqrt(N) / 4` queries and `3 log2 N` non-query
/// operations per query.
pub fn analytic_totals_standard(n_qubits: usize, query_cost_k: f64) -> Result<CostSummary> {
    if n_qubits == 0 {
        return invalid("analytic totals need n >= 1");
    }
    let n = n_qubits as f64;
    let queries = PI * sqrt_n_states(n_qubits) / 4.0;
    let nonquery = 3.0 * n * queries;
    Ok(CostSummary {
        mode: Mode::Standard,
        n_qubits,
        query_cost_k,
        alpha: None,
        eta: None,
        repetitions: queries,
        queries,
        nonquery_ops: nonquery,
        total_ops: query_cost_k * n * queries + nonquery,
        breakdown: None,
        bounds: None,
    })
}

/// Partial-diffusion search with set size `alpha log2(log2 N)`.
///
/// With `eta = n / (alpha log2 n)` sets and `eps = n^(1 - alpha)`, one `U`
/// reaches at least `D / sqrt(N)` with `D = 2 eta (1 - eps) + 1`, so the run
/// needs `pi sqrt(N) / (4 D)` repetitions of `I_s U† I_t U`, each costing
/// `2 eta + 1` queries and `9n` other operations.
pub fn analytic_totals_improved(
    n_qubits: usize,
    alpha: f64,
    query_cost_k: f64,
) -> Result<CostSummary> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return invalid(format!("alpha must be a finite real > 1, got {alpha}"));
    }
    if n_qubits < 4 {
        return invalid(format!(
            "improved analytic totals need n >= 4, got {n_qubits}"
        ));
    }
    let n = n_qubits as f64;
    let log_n = n.log2();
    let eta = n / (alpha * log_n);
    let eps = n.powf(1.0 - alpha);
    let denom = 2.0 * eta * (1.0 - eps) + 1.0;
    let quarter_turn = PI * sqrt_n_states(n_qubits) / 4.0;
    let repetitions = quarter_turn / denom;

    let queries = (2.0 * eta + 1.0) * repetitions;
    let breakdown = NonqueryBreakdown {
        u: 4.0 * n * repetitions,
        u_dagger: 4.0 * n * repetitions,
        reflect_start: n * repetitions,
    };
    let nonquery = breakdown.u + breakdown.u_dagger + breakdown.reflect_start;
    let bounds = ImprovedBounds {
        queries: quarter_turn / (1.0 - eps),
        nonquery_ops: 9.0 / 8.0 * PI * alpha * sqrt_n_states(n_qubits) * log_n,
        nonquery_bound_applies: alpha >= 2.0,
    };
    Ok(CostSummary {
        mode: Mode::Improved,
        n_qubits,
        query_cost_k,
        alpha: Some(alpha),
        eta: Some(eta),
        repetitions,
        queries,
        nonquery_ops: nonquery,
        total_ops: query_cost_k * n * queries + nonquery,
        breakdown: Some(breakdown),
        bounds: Some(bounds),
    })
}

/// The alpha-dependent total operation count minimized by [`optimal_alpha`]:
///
/// `K n (pi sqrt(N) / 4) (1 + n^(1 - alpha)) + pi alpha sqrt(N) log2 n`.
///
/// The non-query term carries coefficient `pi`; its stationary point is the
/// closed form `n^(alpha - 2) = K ln2 / 4`.
pub fn total_ops_objective(n_qubits: usize, query_cost_k: f64, alpha: f64) -> f64 {
    let n = n_qubits as f64;
    let root_n = sqrt_n_states(n_qubits);
    query_cost_k * n * PI * root_n / 4.0 * (1.0 + n.powf(1.0 - alpha))
        + PI * alpha * root_n * n.log2()
}

/// Result of [`optimal_alpha`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalAlpha {
    pub alpha: f64,
    /// Set size `alpha log2 n` in qubits (real-valued).
    pub set_size: f64,
    /// `alpha < 2`: the non-query upper bound no longer applies.
    pub below_two: bool,
    /// `alpha <= 1`: outside the algorithm's parameter range.
    pub at_most_one: bool,
    /// The implied set size is under one qubit.
    pub set_size_below_one: bool,
}

/// `alpha = 2 + ln(K ln2 / 4) / ln(log2 N)`, unclamped.
pub fn optimal_alpha(n_qubits: usize, query_cost_k: f64) -> Result<OptimalAlpha> {
    if !(query_cost_k.is_finite() && query_cost_k > 0.0) {
        return invalid(format!(
            "query cost K must be a finite real > 0, got {query_cost_k}"
        ));
    }
    if n_qubits < 4 {
        return invalid(format!("optimal alpha needs n >= 4, got {n_qubits}"));
    }
    let n = n_qubits as f64;
    let alpha = 2.0 + (query_cost_k * LN_2 / 4.0).ln() / n.ln();
    let set_size = alpha * n.log2();
    Ok(OptimalAlpha {
        alpha,
        set_size,
        below_two: alpha < 2.0,
        at_most_one: alpha <= 1.0,
        set_size_below_one: set_size < 1.0,
    })
}

/// Factor by which the optimized non-query cost undercuts standard search:
/// `log2 N / (3 log2 log2 N)`.
pub fn reduction_factor(n_qubits: usize) -> Result<f64> {
    if n_qubits < 4 {
        return invalid(format!("reduction factor needs n >= 4, got {n_qubits}"));
    }
    let n = n_qubits as f64;
    Ok(n / (3.0 * n.log2()))
}

/// Non-query operations per amplification step `I_s U† I_t U` for a partition
/// into `eta` sets (`9n`) over the same step built from the standard `U` with
/// `eta` inner iterations (`(6 eta + 3) n`).
pub fn q_iteration_op_ratio(n_qubits: usize, eta: usize) -> Result<f64> {
    if eta == 0 || n_qubits == 0 || !n_qubits.is_multiple_of(eta) {
        return invalid(format!("eta = {eta} must divide n = {n_qubits}"));
    }
    let n = n_qubits as u64;
    let improved = 2 * 4 * n + n;
    let standard = 2 * (n + 3 * eta as u64 * n) + n;
    Ok(improved as f64 / standard as f64)
}
