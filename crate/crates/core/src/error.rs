//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while ingesting data, computing
/// preferences, or running an experiment.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure while reading an input file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A line of an input file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A ranking submission listed the same document twice for one topic.
    #[error("topic {topic}: document {doc} appears more than once")]
    DuplicateDocument { topic: String, doc: String },

    /// A topic was requested that has no relevance judgments.
    #[error("topic {topic}: no relevance judgments")]
    UnknownTopic { topic: String },

    /// Two position vectors with different numbers of relevant documents
    /// were compared level by level.
    #[error("mismatched relevant counts: {left} vs {right}")]
    MismatchedRelevantCount { left: u32, right: u32 },

    /// A function argument was outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Exhaustive enumeration would exceed the configured cap.
    #[error("enumeration of {count} arrangements exceeds cap of {cap}")]
    EnumerationCapExceeded { count: u128, cap: u64 },

    /// A statistical routine received too few observations.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The input is degenerate for the requested computation
    /// (zero variance, rank-deficient design matrix, and so on).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative numerical routine failed to converge.
    #[error("no convergence: {0}")]
    NonConvergence(String),
}
