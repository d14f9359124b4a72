use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected dimension {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("cannot trace out {m} of {n} tensor factors (need m < n)")]
    InvalidPartialTrace { m: usize, n: usize },

    #[error("matrix is singular (inverse residual {residual:e})")]
    Singular { residual: f64 },

    #[error("invalid operator type ({d},{k},{m}): {reason}")]
    InvalidType {
        d: usize,
        k: usize,
        m: usize,
        reason: &'static str,
    },

    #[error("operation requires {expected}, got {found}")]
    WrongOperator { expected: String, found: String },

    #[error("malformed braid token {0:?}")]
    MalformedToken(String),

    #[error("braid letter 0 is not a generator")]
    ZeroLetter,

    #[error("braid letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },

    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("invalid matrix file: {0}")]
    MatrixFormat(String),

    #[error("invalid catalog record on line {line}: {reason}")]
    CatalogFormat { line: usize, reason: String },

    #[error("unknown link name {0:?}")]
    UnknownLink(String),

    #[error("mu^{{(x)k}} does not commute with R (residual {residual:e})")]
    ConditionViolation { residual: f64 },

    #[error("enhancement parameter {0} must be invertible")]
    NotInvertible(&'static str),

    #[error("no known normalization for operator {0}")]
    NoNormalization(String),

    #[error(
        "representation on {strands} strands needs dimension {dim}, above the cap {cap}; raise the limit to override"
    )]
    ResourceCap { strands: usize, dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
