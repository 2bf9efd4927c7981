use thiserror::Error;

/// Everything that can go wrong while building or analysing a geometry.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field order {p}^{h} exceeds the configured bound {bound}")]
    FieldTooLarge { p: u64, h: u32, bound: u64 },
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element index {0} is outside the field")]
    ElementOutOfRange(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("projective dimension must be at least {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },
    #[error("space would have {points} points, above the bound of {bound}")]
    SpaceTooLarge { points: u128, bound: u128 },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    EqualPoints,
    #[error("the zero form defines no quadric")]
    ZeroForm,
    #[error("no nucleus: {0}")]
    NoNucleus(String),
    #[error("hyperplane section of size {count} matches no parabolic-quadric section size")]
    Unclassifiable { count: u64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("operation requires {0} characteristic")]
    WrongCharacteristic(&'static str),
    #[error("translation exponent {k} is not coprime to {h}")]
    InvalidExponent { k: u32, h: u32 },
    #[error("line {0} does not pass through the nucleus")]
    LineNotThroughNucleus(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
