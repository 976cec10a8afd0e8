//! Crate-wide error type.

use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A text input (topology file, config file, workload CSV) failed to parse.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A structural invariant or configuration constraint was violated.
    #[error("{0}")]
    Validation(String),

    #[error("unknown topology `{0}` (builtins: arpanet, cost239)")]
    UnknownTopology(String),

    /// A slot block returned by an earlier search no longer fits the grid.
    #[error("stale slot block: link {link}, slot {slot} is no longer available")]
    StaleBlock { link: u32, slot: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// CLI exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
