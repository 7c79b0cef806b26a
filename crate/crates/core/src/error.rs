// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A table or window is too short for the requested evaluation.
    #[error("range error: {0}")]
    Range(String),

    /// A mathematical hypothesis of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested work exceeds the configured budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
