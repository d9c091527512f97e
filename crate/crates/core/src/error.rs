//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("point {index} has no neighbor within radius {radius}")]
    IsolatedPoint { index: usize, radius: f64 },

    #[error("neighborhood graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("rank deficiency during Gram-Schmidt at column {column} (neighborhood {neighborhood})")]
    RankDeficient { neighborhood: usize, column: usize },

    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    #[error("kernel sum q(x_{index}) is zero; kernel width too small")]
    ZeroKernelSum { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Eigensolver(e.to_string())
    }
}
