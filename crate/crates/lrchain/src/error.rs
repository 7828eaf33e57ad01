//! Error taxonomy shared by the library and the command-line front end.
//!
//! Every failure is classified into one of three categories that map onto
//! the process exit codes used by the `lrchain` binary:
//!
//! | category    | exit code | meaning                                        |
//! |-------------|-----------|------------------------------------------------|
//! | `config`    | 2         | invalid specification, parameters, or config   |
//! | `numerical` | 3         | an eigensolver or iteration failed to converge |
//! | `io`        | 4         | file system / serialization failure            |

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A domain object (chain, disorder model, field, …) violates its invariants.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// A run configuration (CLI flags or JSON file) is malformed or inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A numerical routine failed (LAPACK nonzero info, iteration breakdown, …).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Reading or writing an artifact failed.
    #[error("I/O failure: {0}")]
    Io(String),
}

impl Error {
    /// Machine-readable category name, stable across releases.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) | Error::InvalidConfig(_) => "config",
            Error::Numerical(_) => "numerical",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code for the binary front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_) | Error::InvalidConfig(_) => 2,
            Error::Numerical(_) => 3,
            Error::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
