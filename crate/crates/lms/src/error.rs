//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by mesh construction, file parsing and the analysis
/// pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A text input could not be parsed. Carries the 1-based line number of
    /// the offending line.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The mesh violates a structural invariant (dangling indices, degenerate
    /// triangles, isolated vertices where they are not allowed).
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// An operation was called outside its domain (e.g. quality of a fully
    /// degenerate triangle, quantile of an all-cold profile).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
