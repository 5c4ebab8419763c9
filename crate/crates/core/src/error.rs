use thiserror::Error;

/// Failure modes of the numeric layer.
///
/// `Domain` means the caller handed an argument outside the documented range
/// (recoverable: fix the input). `Numerical` means an algorithm failed to
/// reach its tolerance (iteration cap, step-size underflow, insufficient
/// resolution). `UnsupportedFamily` marks operations that are only defined
/// for one curve family.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain: {0}")]
    Domain(String),
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
