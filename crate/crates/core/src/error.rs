use thiserror::Error;

/// Errors produced by the simulator, the cost calculus and the dense reference.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A fast kernel disagreed with its dense matrix.
    #[error("equivalence failure in {operator} (n = {n_qubits}, {input}): max deviation {deviation:.3e} > {tolerance:.1e}")]
    Equivalence {
        operator: String,
        n_qubits: usize,
        input: String,
        deviation: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
