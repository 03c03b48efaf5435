use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A caller violated a documented precondition (non-hermitian operator,
    /// non-unitary evolution, monitor not in its fiducial state, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Input is well-formed but outside the supported problem class.
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    /// Post-selection branch has zero norm; the conditioning outcome never occurs.
    #[error("post-selection impossible: projected branch has zero norm")]
    PostSelectionImpossible,

    /// Scenario document failed validation. `field` names the offending entry.
    #[error("invalid scenario: {field}: {message}")]
    Validation { field: String, message: String },
}

impl Error {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
