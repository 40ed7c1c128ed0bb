use thiserror::Error;

/// Failures reported by the library. Every variant maps to a stable
/// machine-readable token via [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("variable contexts differ")]
    ContextMismatch,
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("inhomogeneous polynomial: {0}")]
    Inhomogeneous(String),
    #[error("dimension budget exceeded in degree {degree}: {needed} columns, cap {cap}")]
    DimensionBudget { degree: u32, needed: usize, cap: usize },
    #[error("not in ideal: {0}")]
    NotInIdeal(String),
    #[error("inexact division: {0}")]
    NotDivisible(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("no lift exists: {0}")]
    NoLift(String),
    #[error("not expressible in the known generators: {0}")]
    NotExpressible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Unsupported(_) => "unsupported",
            Error::Range(_) => "range",
            Error::ContextMismatch => "context-mismatch",
            Error::RingMismatch => "ring-mismatch",
            Error::Inhomogeneous(_) => "inhomogeneous",
            Error::DimensionBudget { .. } => "dimension-budget",
            Error::NotInIdeal(_) => "not-in-ideal",
            Error::NotDivisible(_) => "not-divisible",
            Error::Inconsistent(_) => "inconsistent",
            Error::NoLift(_) => "no-lift",
            Error::NotExpressible(_) => "not-expressible",
            Error::Parse(_) => "parse",
            Error::Precondition(_) => "precondition",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
