use thiserror::Error;

/// Errors raised by the simulator, the switch builder and the experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    Index { index: usize, n_qubits: usize },

    #[error("value {value} outside the valid range [0, {bound})")]
    Range { value: usize, bound: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("spectrum mismatch: reconstruction error {max_error:e} exceeds {tolerance:e} with max frequency {max_freq}")]
    SpectrumMismatch {
        max_error: f64,
        tolerance: f64,
        max_freq: usize,
    },

    #[error("optimizer failed: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
