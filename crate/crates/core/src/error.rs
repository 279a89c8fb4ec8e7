use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by the process exit code the command-line front end
/// maps them to: configuration problems exit with 2, data problems with 3 and
/// numerical failures with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}, line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("series too short: need at least {required} observations, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular design matrix: {0}")]
    Singular(String),

    #[error("non-finite value at step {step}: {context}")]
    NonFinite { step: usize, context: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code for this error: 2 config, 3 data, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => 2,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Data(_)
            | Error::EmptyInput(_)
            | Error::TooShort { .. }
            | Error::Shape(_) => 3,
            Error::Singular(_) | Error::NonFinite { .. } | Error::Numerical(_) => 4,
            Error::Stage { source, .. } => source.exit_code(),
        }
    }
}
