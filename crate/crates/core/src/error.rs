use thiserror::Error;

/// Errors produced by the series engine and its front ends.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order {requested} exceeds the configured maximum {cap}")]
    OrderTooLarge { requested: usize, cap: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("vertex index {index} out of range for a tree with {nodes} nodes")]
    VertexOutOfRange { index: usize, nodes: usize },
    #[error("malformed tree code: {0}")]
    MalformedCode(String),
    #[error("series is not invertible: coefficient of the single-node tree is zero")]
    NotInvertible,
    #[error("iterate index must be at least 1")]
    ZeroIterate,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("field valuation {found} is below the required {required}")]
    Valuation { found: String, required: usize },
    #[error("series order {found} is too small, need at least {required}")]
    InsufficientOrder { found: usize, required: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid document: {0}")]
    Schema(String),
}

impl Error {
    /// True for violations of a mathematical precondition (as opposed to
    /// malformed input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotInvertible | Error::Valuation { .. } | Error::InsufficientOrder { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
