use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Variants are grouped by how a caller should react: `Invalid` means the
/// inputs violate a documented precondition, `Resource` means a hard work or
/// memory cap was hit, and `Numeric` means an iteration failed to converge or
/// produced a non-finite value. The CLI maps these onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Input validation failed (bad dimensions, out-of-domain values, malformed files).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A configured work or memory cap would be exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A numeric routine failed to converge or met a degenerate value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Underlying I/O failure while reading or writing files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// Process exit code for this error class: 2 validation, 3 resource cap,
    /// 4 numeric failure, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 2,
            Error::Resource(_) => 3,
            Error::Numeric(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
