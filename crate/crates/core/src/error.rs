use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("polyharmonic order must be at least 1")]
    InvalidOrder,

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("Gegenbauer parameter lambda must exceed -1/2, got {0}")]
    InvalidLambda(f64),

    #[error("generating-function argument must satisfy |w| < 1, got |w| = {0}")]
    GeneratingRadius(f64),

    #[error("point is not on the rotated sphere for p = {p}: {reason}")]
    OffSphere { p: usize, reason: String },

    #[error("point is not strictly inside the rotated ball for p = {p}: {reason}")]
    NotInterior { p: usize, reason: String },

    #[error("singular kernel evaluation: |denominator| = {0:e}")]
    Singular(f64),

    #[error("series truncation would need more than {cap} terms (radius {radius})")]
    SeriesCap { cap: usize, radius: f64 },

    #[error("pair ({0}) lies outside the Lie domain L(z)L(w) < 1")]
    OutsideLieDomain(usize),

    #[error("quadrature resolution must be at least 4, got {0}")]
    Resolution(usize),

    #[error("unsupported dimension {0} for this operation")]
    UnsupportedDimension(usize),

    #[error("non-finite integrand value at sector {sector}, node {node}")]
    Integrand { sector: usize, node: usize },

    #[error("boundary data is inconsistent: {0}")]
    BoundaryData(String),

    #[error("singular linear system")]
    SingularSystem,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
