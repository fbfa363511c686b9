//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed edge-list input (bad field count, unparsable weight, ...).
    #[error("parse error at {source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    /// Structurally valid input that violates a graph invariant.
    #[error("invalid graph data: {0}")]
    InvalidGraph(String),

    #[error("graph `{0}` has no nodes")]
    EmptyGraph(String),

    /// A plan or option combination that cannot be executed.
    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    /// Backbone/original mismatch detected during evaluation.
    #[error("containment violation: {0}")]
    Containment(String),

    #[error("numerical failure on graph `{graph}`: {message}")]
    Numerical { graph: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
