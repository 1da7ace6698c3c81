use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system configuration: {0}")]
    InvalidSystem(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("degenerate slope-intercept point (k = {k}, b = {b}): {reason}")]
    DegenerateKb { k: f64, b: f64, reason: &'static str },

    #[error("degenerate triangle region (area {area:e})")]
    DegenerateRegion { area: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("point (k = {k}, b = {b}) outside the k-b domain: k in [0, {k_max}], b in [-1, 1]")]
    OutOfDomain { k: f64, b: f64, k_max: f64 },

    #[error("unknown codebook selector `{0}` (expected top, layer=<l>, elementary, dft or distance-ring)")]
    UnknownSelector(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the user's configuration rather than the
    /// environment. The CLI maps these to exit code 2 and I/O errors to 3.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
