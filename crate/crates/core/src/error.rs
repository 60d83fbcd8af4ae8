use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("missing variable {0} in assignment")]
    MissingVariable(String),
    #[error("series not invertible at this truncation")]
    SeriesNotInvertible,
    #[error("determinant is not a unit monomial")]
    NonMonomialDeterminant,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not square")]
    NotSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("tau function vanishes at this point")]
    TauVanishes,
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("duplicate shift family {0}")]
    DuplicateFamily(char),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
