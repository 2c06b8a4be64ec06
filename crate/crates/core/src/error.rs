use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("open surface: {0}")]
    OpenSurface(String),

    #[error("isosurface extraction produced an empty mesh")]
    EmptyMesh,

    #[error("component placement failed after {attempts} attempts")]
    AssemblyFailed { attempts: usize },

    #[error("point cloud has {points} points, above the Rips cap of {cap}")]
    SizeLimit { points: usize, cap: usize },

    #[error("target diagram has {targets} pairs but only {predictions} predictions are available")]
    CapacityExceeded { targets: usize, predictions: usize },

    #[error("undefined similarity: {0}")]
    UndefinedSimilarity(String),

    #[error("non-finite value in decoder block {block} ({site})")]
    NumericOverflow { block: usize, site: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
