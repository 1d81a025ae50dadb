use thiserror::Error;

/// Failure classes shared by every module. The CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Shape mismatch or unparsable input.
    #[error("structural error: {0}")]
    Structural(String),
    /// Mathematically invalid input (non-dominant parameter, zero root, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Unknown form label or parameter out of range.
    #[error("configuration error: {0}")]
    Config(String),
    /// A configured size bound was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Structural(_) | Error::Domain(_) | Error::Config(_) => 2,
            Error::Resource(_) => 3,
            Error::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! internal {
    ($($arg:tt)*) => { $crate::error::Error::Internal(format!($($arg)*)) };
}
pub(crate) use domain;
pub(crate) use internal;
