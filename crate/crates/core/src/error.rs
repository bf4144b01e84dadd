use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A torus weight that must be inverted vanished at the sampled weights.
    #[error("non-generic weights (seed {seed}): {context}")]
    NonGenericWeights { seed: u64, context: String },
    #[error("unsupported insertions: {0}")]
    UnsupportedInsertions(String),
    #[error("malformed encoding `{encoding}`: {reason}")]
    Parse { encoding: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
