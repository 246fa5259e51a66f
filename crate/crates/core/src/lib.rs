//! Simulation and operation accounting for quantum search with partial
//! inversion about average.
//!
//! The crate is organised bottom-up:
//!
//! * [`statevec`]: a dense real state vector with Hadamard, Walsh-Hadamard
//!   and selective phase-inversion kernels.
//! * [`diffusion`]: full and partial inversion about average, the standard
//!   iteration and the composite operator `U` built on a qubit [`Partition`].
//! * [`amplify`]: amplitude amplification of any such `U`, end-to-end runs
//!   and their reports.
//! * [`costs`]: query / non-query operation ledgers and the closed-form
//!   totals they are compared with.
//! * [`reference`]: dense `N x N` matrices used as an independent oracle.

pub mod amplify;
pub mod costs;
pub mod diffusion;
mod error;
mod kernels;
pub mod reference;
pub mod statevec;

pub use amplify::{
    measure_uts, optimal_repetitions, predicted_uts_lower_bound, run, Mode, Predictions,
    Repetitions, RunConfig, RunReport, SearchOperator, TargetSpec,
};
pub use costs::{
    analytic_totals_improved, analytic_totals_standard, cost_of_composite_u, optimal_alpha,
    q_iteration_op_ratio, reduction_factor, CostLedger, CostSummary, OptimalAlpha,
};
pub use diffusion::{build_partition, Partition, PartitionSpec};
pub use error::{Error, Result};
pub use statevec::{QubitSet, StateVector, MAX_QUBITS};
