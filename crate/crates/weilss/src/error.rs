use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field F_{p}^{k} exceeds the size cap of {cap} elements")]
    FieldTooLarge { p: u64, k: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete log of zero is undefined")]
    ZeroArgument,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("{0} is not a multiple of {1}")]
    NotAMultiple(u64, u64),
    #[error("{0} is not a unit mod {1}")]
    NotAUnit(u64, u64),
    #[error("invalid Frobenius action: {0}")]
    InvalidAction(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("characters live over different fields")]
    FieldMismatch,
    #[error("character order {n} does not divide the group order {q} - 1")]
    BadCharOrder { n: u64, q: u64 },
    #[error("no exponential-sum closed form for this family")]
    NoClosedForm,
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("invalid curve parameters: {0}")]
    BadParameters(String),
    #[error("point-count cache is corrupt ({0}); delete the file and re-run")]
    CorruptCache(String),
    #[error("cache key {0} already holds a different value (determinism violation)")]
    CacheConflict(String),
    #[error("newton polygon needs a unit leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("supersingularity tests disagree: {0}")]
    InternalDisagreement(String),
    #[error("survey aborted, a proved theorem would be contradicted: {0}")]
    TheoremContradiction(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
