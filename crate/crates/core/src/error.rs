use thiserror::Error;

/// Errors raised by the geometry, algebra and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular jet: {0}")]
    SingularJet(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A jet was asked for a derivative beyond its valid truncation order.
    #[error("jet order {have} is insufficient, need {need}")]
    InsufficientOrder { have: u8, need: u8 },

    #[error("rank deficiency: {0}")]
    Rank(String),

    #[error("frame construction failed: {0}")]
    Frame(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("embedding error: {0}")]
    Embedding(String),

    #[error("singular value: {0}")]
    Singular(String),

    #[error("degenerate equation: {0}")]
    Degenerate(String),

    #[error("identity violated: {what} residual {residual:e} exceeds {tolerance:e}")]
    IdentityViolation {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("io error at {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
