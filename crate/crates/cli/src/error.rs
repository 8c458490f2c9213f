use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("verification failed in suite `{suite}`")]
    Verification { suite: String, counterexample: serde_json::Value },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Verification { .. } => 4,
        }
    }
}

impl From<qleak_core::Error> for CliError {
    fn from(e: qleak_core::Error) -> Self {
        match e {
            qleak_core::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("malformed JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("csv: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
