use thiserror::Error;

/// Failure modes shared by every module of the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A complexity or size guard was exceeded.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    /// An iterative numerical method failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// The requested construction is not representable by this engine.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
