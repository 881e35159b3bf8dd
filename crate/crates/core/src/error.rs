use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuonError {
    #[error("parameters are not hermitian: q[{0},{1}] is not the conjugate of q[{1},{0}]")]
    NonHermitian(String, String),
    #[error("strict mode requires |q[{0},{1}]| < 1")]
    OutsideUnitDisc(String, String),
    #[error("conflicting explicit entries for q[{0},{1}] and q[{1},{0}]")]
    ConflictingEntries(String, String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("singular matrix (|det| = {det:e}, threshold {threshold:e})")]
    Singular { det: f64, threshold: f64 },
    #[error("word length {n} exceeds the size cap {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("expansion truncated at degree {max_degree} cannot act on a word of length {len}")]
    Truncation { max_degree: usize, len: usize },
    #[error("zero parameter raised to a negative power")]
    ZeroDivision,
    #[error("inconsistent linear system (residual {0:e})")]
    Inconsistent(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QuonError>;
