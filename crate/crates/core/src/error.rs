use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{x} is not invertible modulo {q}")]
    NotInvertible { x: i64, q: u64 },
    #[error("gcd({a}, {b}) = {g} but the arguments must be coprime")]
    NotCoprime { a: i64, b: u64, g: u64 },
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("requested precision {requested:e} is below the attainable {attainable:e}")]
    PrecisionUnattainable { requested: f64, attainable: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
