use nlcf_core::Error as CoreError;
use serde_json::json;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::ConfigParse { .. } => "ConfigParse",
            CliError::Core(e) => e.code(),
            CliError::VerifyFailed { .. } => "VerifyFailed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::ConfigParse { .. } => EXIT_INVALID,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_)
                | CoreError::InvalidSet(_)
                | CoreError::UnsupportedKind(_)
                | CoreError::UnsupportedOnGrid { .. }
                | CoreError::GridTooLarge { .. }
                | CoreError::NonBoundaryPoint(_) => EXIT_INVALID,
                _ => EXIT_NUMERICAL,
            },
            CliError::VerifyFailed { .. } => EXIT_NUMERICAL,
        }
    }

    /// One-line JSON report for stderr.
    pub fn to_json_line(&self) -> String {
        json!({ "error": self.code(), "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(CoreError::Io(e.to_string()))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(CoreError::InvalidParameter(msg.into()))
}
