use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not a prime power >= 2")]
    InvalidQ(u32),
    #[error("polynomial {0:?} is not irreducible of the requested degree over F_{1}")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("level too large: {points} points exceeds the ceiling of {ceiling}")]
    LevelTooLarge { points: u64, ceiling: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("mathematical inconsistency: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
