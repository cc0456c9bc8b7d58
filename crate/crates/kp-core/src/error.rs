//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KpError {
    #[error("graph validation failed: {0}")]
    Validation(String),
    #[error("unmatched composable pair ({0},{1})")]
    UnmatchedSquarePair(String, String),
    #[error("paths are not composable: source {0} != range {1}")]
    NotComposable(String, String),
    #[error("degree {0} is not <= {1}")]
    DegreeOutOfRange(String, String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown edge '{0}'")]
    UnknownEdge(String),
    #[error("operands live over different graphs")]
    GraphMismatch,
    #[error("boundary-path space is not finitely representable as eventually periodic paths: {0}")]
    NotEventuallyPeriodic(String),
    #[error("no separating cut exists within the period bound: {0}")]
    SeparationNotFound(String),
    #[error("grading window too small: {0}")]
    WindowOverflow(String),
    #[error("truncation margin too small: {0}")]
    MarginTooSmall(String),
    #[error("vertex set is not saturated and hereditary: {0}")]
    NotSaturatedHereditary(String),
    #[error("desourcification vertex {0} is not realizable")]
    Unrealizable(String),
    #[error("ideal transport undefined: {0}")]
    TransportAtBoundary(String),
    #[error("matrix-unit hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid ring: {0}")]
    Ring(String),
    #[error("probe level mismatch: {0}")]
    ProbeLevel(String),
}

pub type Result<T> = std::result::Result<T, KpError>;
