use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid experiment description (bad key, value or combination).
    #[error("configuration error: {0}")]
    Config(String),
    /// Caller violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Configuration outside the supported range.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// An iterative or adaptive routine failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
