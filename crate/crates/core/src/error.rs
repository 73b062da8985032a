use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants carry already-serialized values so the error stays cheap to
/// clone and print in reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor enclosure {0} contains zero")]
    PossiblyZeroDivisor(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rationality of {0} cannot be decided")]
    RationalityUndecidable(String),
    #[error("carrier is not invariant: {point} maps to {image}")]
    NotInvariant { point: String, image: String },
    #[error("maps are not mutually inverse at {0}")]
    NotInverse(String),
    #[error("unsupported system kind: {0}")]
    UnsupportedSystemKind(String),
    #[error("not a witness: {0}")]
    NotAWitness(String),
    #[error("modulus violated: {0}")]
    ModulusViolated(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown law: {0}")]
    UnknownLaw(String),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
