use thiserror::Error;

/// A basis matrix whose scaled pivot fell below `eps_singular`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("singular or near-singular linear system")]
pub struct Singular;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Singular(#[from] Singular),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index set must have exactly {expected} distinct indices, got {got:?}")]
    BadIndexSet { expected: usize, got: Vec<usize> },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("pair ({0}, {1}) is not an edge of the polygon hull")]
    NotAnEdge(usize, usize),
    #[error("no viewpoint certifies edge ({0}, {1})")]
    NoViewpoint(usize, usize),
}
