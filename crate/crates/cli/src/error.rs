use std::path::PathBuf;

use desitter_core::GeometryError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("point {point:?} is at the projection pole")]
    AtPole { point: [f64; 4] },
    #[error("pole axis must be 2, 3 or 4, got {0}")]
    PoleAxis(usize),
    #[error("pole sign must be +1 or -1, got {0}")]
    PoleSign(i8),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("row {row}: {message}")]
    Record { row: usize, message: String },
    #[error("unknown example {0:?}; expected 4.1, 4.2 or 4.3")]
    UnknownExample(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}
