use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("weight-independence failure:\n{0}")]
    Consistency(String),
    #[error("degenerate weights after retries: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Consistency(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

impl From<gwloc::Error> for CliError {
    fn from(e: gwloc::Error) -> Self {
        match e {
            gwloc::Error::NonGenericWeights { .. } => CliError::Degenerate(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}
