use thiserror::Error;

/// Errors produced by basis handling, reduction and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },

    #[error("basis has no rows")]
    EmptyBasis,

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("rank deficiency detected at row {row}")]
    RankDeficient { row: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("iteration cap exceeded after {iterations} iterations (possible precision failure)")]
    IterationCap { iterations: u64 },

    #[error("precision failure: {0}")]
    Precision(String),

    #[error("dimension {n} too large for {what} (limit {limit})")]
    DimensionTooLarge { n: usize, what: &'static str, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
