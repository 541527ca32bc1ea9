//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants map onto the CLI exit codes: [`Error::Config`] exits with 2,
/// everything else with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// An input value violated a construction invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A parameter lies outside the solvable domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested operating point is not reachable with the configured hardware.
    #[error("capability error: {0}")]
    Capability(String),
    /// A numerical integration left its tolerance envelope.
    #[error("integration failure: {0}")]
    Integration(String),
    /// Configuration file could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the batch CLI: 2 for config errors, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
