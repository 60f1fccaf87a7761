use thiserror::Error;

/// Errors surfaced by the engine. Mathematical *law violations* are not
/// errors: validation is total and collects them into reports instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree window overflow: {0}")]
    WindowOverflow(String),
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("not a complex: d∘d ≠ 0 at degree {0}")]
    NotAComplex(i32),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
