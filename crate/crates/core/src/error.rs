use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field {p}^{degree} exceeds the supported size (at most 2^62 elements)")]
    FieldTooLarge { p: u64, degree: u64 },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("cannot parse field spec {0:?}")]
    BadFieldSpec(String),
    #[error("cannot parse element {0:?}")]
    BadElement(String),
    #[error("elements belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u64),
    #[error("p = {p} divides {n}")]
    CharacteristicDivides { p: u64, n: u64 },
    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),
    #[error("point set is not an arc: {0}")]
    NotAnArc(String),
    #[error("projective order exceeds the cap {0}")]
    OrderCapExceeded(u64),
    #[error("linear system has only the zero solution")]
    EmptyNullspace,
    #[error("property check failed: {0}")]
    PropertyFailed(String),
    #[error("polynomial does not match the canonical family: {0}")]
    FamilyMismatch(String),
    #[error("polynomial is not square-free: {0}")]
    NotSquareFree(String),
    #[error("truncation order {0} is insufficient")]
    TruncationInsufficient(usize),
    #[error("curve is reducible")]
    Reducible,
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("methods disagree: {0}")]
    Disagreement(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("JSON error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
