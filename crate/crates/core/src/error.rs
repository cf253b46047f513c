use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("bidegree mismatch: ({0},{1}) vs ({2},{3})")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("unsupported dimension n = {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },

    #[error("double form is not slot-symmetric")]
    NotSymmetric,

    #[error("first Bianchi identity violated, defect = {defect}")]
    BianchiDefect { defect: String },

    #[error("vectors are not orthonormal (Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("independent routes disagree for {what}: {lhs} vs {rhs}")]
    RouteMismatch {
        what: &'static str,
        lhs: String,
        rhs: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
