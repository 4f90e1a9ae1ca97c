use thiserror::Error;

/// Errors raised by model construction, diagonalization and phase-space
/// integration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("eigensolver did not converge (best residual {residual:.3e})")]
    EigenConvergence { residual: f64 },

    #[error("basis truncation did not converge below dimension {max_dim} (cutoffs tried {cutoffs_tried:?}, last dE0 {last_delta:.3e}, tail weight {tail_weight:.3e})")]
    TruncationConvergence {
        max_dim: usize,
        cutoffs_tried: Vec<usize>,
        last_delta: f64,
        tail_weight: f64,
    },

    #[error("quadrature did not converge within {max_nodes} nodes (last W values {last:?})")]
    QuadratureConvergence { max_nodes: usize, last: Vec<f64> },

    #[error("sweep point failed at size {size}, {control} = {value}: {source}")]
    SweepPoint {
        size: f64,
        control: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("classification needs at least {needed} points per size, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
