use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("differential does not square to zero: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("invalid simplicial complex: {0}")]
    InvalidSimplicialComplex(String),
    #[error("local system is not flat: {0}")]
    NotFlat(String),
    #[error("invalid local system: {0}")]
    InvalidLocalSystem(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("pairing does not commute with transports: {0}")]
    NotEquivariant(String),
    #[error("relator violated: {0}")]
    RelatorViolation(String),
    #[error("complex is disconnected")]
    Disconnected,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("degree bookkeeping violated: {0}")]
    Degree(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
