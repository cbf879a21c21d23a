use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The variants map onto the CLI exit codes: parameter and input problems
/// exit with 1, exceeded resource caps exit with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("irreducibility not certified: {0}")]
    Diagnostic(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serde(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! param_err {
    ($($arg:tt)*) => { $crate::error::Error::Parameter(format!($($arg)*)) };
}
macro_rules! resource_err {
    ($($arg:tt)*) => { $crate::error::Error::Resource(format!($($arg)*)) };
}
macro_rules! internal_err {
    ($($arg:tt)*) => { $crate::error::Error::Internal(format!($($arg)*)) };
}

pub(crate) use {internal_err, param_err, resource_err};

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
