use thiserror::Error;

use recform_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or an unreadable or malformed problem file.
    #[error("{0}")]
    Input(String),

    /// A mathematical precondition does not hold (`γ₀ = 0`, `Δ = 0`).
    #[error("{0}")]
    Math(CoreError),

    /// A result could not be certified: failed identity, residual too large.
    #[error("{0}")]
    Certification(String),

    #[error("{0}")]
    Other(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Math(_) => 2,
            CliError::Certification(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ZeroGamma
            | CoreError::DependentInitials { .. }
            | CoreError::Singular { .. }
            | CoreError::OrderTooSmall(_) => CliError::Math(e),
            CoreError::Certification { .. }
            | CoreError::Precision { .. }
            | CoreError::Invariant(_) => CliError::Certification(e.to_string()),
            CoreError::ParseRational(_) | CoreError::Dimension(_) | CoreError::Arity { .. } => {
                CliError::Input(e.to_string())
            }
            other => CliError::Other(other),
        }
    }
}
