use thiserror::Error;

/// Errors raised by the library. Each variant maps to a CLI exit code via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an element that is zero at precision")]
    DivisionByZero,
    #[error("operands live in different rings: {0}")]
    FieldMismatch(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("element outside the evaluator's domain: {0}")]
    Domain(String),
    #[error("inexact division by p in structure polynomial {0}")]
    InexactDivision(String),
    #[error("polynomial is not irreducible mod p")]
    Reducible,
    #[error("Dieudonné-Manin splitting unavailable: {0}")]
    DmUnavailable(String),
    #[error("inconsistent computation: {0}")]
    Inconsistent(String),
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
}

impl Error {
    /// 2 for bad input, 3 for precision trouble, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precision(_) | Error::DmUnavailable(_) | Error::WindowExhausted(_) => 3,
            Error::Invalid(_)
            | Error::Domain(_)
            | Error::FieldMismatch(_)
            | Error::Reducible
            | Error::NotRepresentable(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
