use thiserror::Error;

use crate::algebra::PolyKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("{what} of {value} exceeds the limit of {limit}")]
    SizeExceeded { what: &'static str, value: u64, limit: u64 },
    #[error("division by zero in F_q")]
    DivisionByZero,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("polynomial degree {0} is outside 1..=2")]
    DegreeOutOfRange(usize),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("expected a {expected} class, found {found}")]
    WrongClassKind { expected: &'static str, found: PolyKind },
    #[error("{0} is not a root of the minimal polynomial")]
    NotARoot(u16),
    #[error("the matrix set must be nonempty")]
    EmptySet,
    #[error("class of {0} is empty or has the wrong size (internal inconsistency)")]
    EmptyClass(String),
    #[error("structure check failed: {0}")]
    Inconsistent(String),
    #[error("no class with id {0}")]
    UnknownClass(usize),
    #[error("no structural decomposition is known for this union: {0}")]
    UnsupportedUnion(String),
    #[error("parse error{}: {msg}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },
}

impl Error {
    pub(crate) fn size(what: &'static str, value: u64, limit: u64) -> Self {
        Error::SizeExceeded { what, value, limit }
    }
}
