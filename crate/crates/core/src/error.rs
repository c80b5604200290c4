use thiserror::Error;

/// Errors raised by graph construction, enumeration and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: unknown ids, inconsistent half-edge data, bad JSON.
    #[error("input error: {0}")]
    Input(String),

    /// Input is well formed but outside the operation's domain
    /// (e.g. a non-cyclic edge set where a cyclic one is required).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size cap would be exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An identity or theorem check failed; `witness` names the offending object.
    #[error("verification failed for {witness}: {message}")]
    Verification { witness: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn verification(witness: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Verification {
            witness: witness.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
