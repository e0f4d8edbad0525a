use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar tower mismatch: {0} vs {1}")]
    TowerMismatch(String, String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not invertible in {0}")]
    NotInvertible(String),

    #[error("unsupported algebra: type {0} rank {1}")]
    UnsupportedAlgebra(String, usize),

    #[error("representation {0} is not available for this algebra")]
    UnsupportedRepresentation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not in the image of the Lie algebra")]
    NotInLieAlgebra,

    #[error("parameter must be nonzero: {0}")]
    ZeroParameter(&'static str),

    #[error("connection is not regular-singular in this gauge (pole order {0})")]
    NotFirstOrder(i64),

    #[error("operation requires a {expected} coordinate, found {found}")]
    WrongCoordinate { expected: &'static str, found: &'static str },

    #[error("connection is not an oper: {0}")]
    NotAnOper(String),

    #[error("unsupported connection: {0}")]
    UnsupportedConnection(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{check}: {source}")]
    Subcheck { check: &'static str, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
