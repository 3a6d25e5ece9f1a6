use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("configuration ({x}, {y}) lies outside the workspace extent [0, {extent}]")]
    OutOfExtent { x: f64, y: f64, extent: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} configuration is in collision")]
    Colliding(&'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("training diverged at epoch {epoch} (loss {loss})")]
    Diverged { epoch: usize, loss: f64 },

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("dataset file: {0}")]
    DatasetFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<V> = std::result::Result<V, Error>;
