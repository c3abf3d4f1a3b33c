use thiserror::Error;

/// Errors that stop a command before it produces a report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] hsl_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 1 for numerical failures (exhausted budgets), 2 for everything the user
    /// can fix: bad flags, out-of-domain parameters, unwritable paths.
    pub fn exit_code(&self) -> i32 {
        use hsl_core::Error as E;
        match self {
            CliError::Core(E::McBudgetExceeded(_)) => 1,
            CliError::Core(E::NonIntegrable { .. }) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
