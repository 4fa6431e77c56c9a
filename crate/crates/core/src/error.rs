use thiserror::Error;

use crate::walk::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("step {step} outside lifetime [0, {lifetime}]")]
    StepOutOfRange { step: usize, lifetime: usize },

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {edge} out of range (m = {m})")]
    EdgeOutOfRange { edge: usize, m: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid presence pattern on edge {edge}: {reason}")]
    InvalidPresence { edge: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lifetime exhausted at step {step}")]
    LifetimeExhausted { step: usize },

    #[error("reachability precondition violated at step {step}: {from} and {to} not connected inside the vertex set")]
    ReachPrecondition { step: usize, from: usize, to: usize },

    #[error("invalid walk: {0}")]
    InvalidWalk(Violation),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("underlying graph has the wrong shape: {0}")]
    ShapeMismatch(String),

    #[error("instance too large for this solver: {0}")]
    LimitExceeded(String),

    #[error("no exploration schedule within the lifetime")]
    Infeasible,

    #[error("generation failed after {attempts} attempts (seed {seed})")]
    GenerationFailed { seed: u64, attempts: usize },

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::InvalidWalk(v)
    }
}
