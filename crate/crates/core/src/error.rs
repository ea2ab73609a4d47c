use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("truncation order {order} too small: {what}")]
    TruncationTooSmall { order: usize, what: String },
    #[error("index out of range: {0}")]
    InvalidIndex(String),
    #[error("nonlinear Delta occurrence in {0}")]
    NonlinearDelta(String),
    #[error("basis is not triangular: {0}")]
    NonTriangular(String),
    #[error("missing entry {0}")]
    MissingEntry(String),
    #[error("symbol {0} does not belong to the phase space")]
    ForeignSymbol(String),
    #[error("elimination failed, residual {0}")]
    EliminationFailed(String),
    #[error("rewrite depth limit {0} exceeded")]
    DepthLimit(usize),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
