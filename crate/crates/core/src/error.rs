use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pivot ({row}, {col}): {reason}")]
    InvalidPivot {
        row: usize,
        col: usize,
        reason: &'static str,
    },

    #[error("inconsistent system: syndrome bit {row} cannot be explained")]
    Inconsistent { row: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid probability {value}: {reason}")]
    InvalidProbability { value: f64, reason: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unsupported construct `{construct}` (flatten the model first)")]
    Unsupported { line: usize, construct: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("enumeration over {n} columns exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("belief propagation did not satisfy the syndrome after {rounds} rounds")]
    NotConverged { rounds: usize },

    #[error("no error is consistent with the syndrome")]
    NoSolution,

    #[error("candidate list is empty")]
    EmptyCandidates,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
