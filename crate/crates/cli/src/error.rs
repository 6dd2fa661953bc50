use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// A check ran and did not meet its tolerance.
pub const EXIT_VERIFICATION: u8 = 1;
/// Bad flags, config file or parameters; nothing was computed.
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] cavqed_core::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use cavqed_core::Error as E;
        match self {
            CliError::Verification(_) => EXIT_VERIFICATION,
            // the run started but the numerics broke down
            CliError::Core(E::TruncationViolated { .. } | E::NumericalInstability { .. } | E::UndefinedPhase) => {
                EXIT_VERIFICATION
            }
            _ => EXIT_CONFIG,
        }
    }

    pub(crate) fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
