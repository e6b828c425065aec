use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("codomains differ: {0} vs {1}")]
    CodomainMismatch(usize, usize),
    #[error("domains differ: {0} vs {1}")]
    DomainMismatch(usize, usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("subspace does not lie in an ambient space of dimension {0}")]
    OutsideAmbient(usize),
    #[error("subspace is not stable under the Frobenius at {0}")]
    NotStable(String),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("unknown place {0}")]
    UnknownPlace(String),
    #[error("place {0} is exempt")]
    ExemptPlace(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("shape has relations; Ext is only computed for relation-free shapes")]
    RelationsPresent,
    #[error("unknown vertex or slot {0}")]
    MissingVertex(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("object is not of level <= 1: {0}")]
    LevelViolation(String),
    #[error("coefficient too large for rational-root search")]
    CoefficientTooLarge,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
