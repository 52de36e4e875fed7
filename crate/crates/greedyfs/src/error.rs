use thiserror::Error;

/// All failures the library can report, grouped by what went wrong rather
/// than where. The CLI maps each group to a stable process exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad configuration or usage: invalid parameter values, contradictory
    /// flags, malformed config files.
    #[error("config error: {0}")]
    Config(String),

    /// The input data cannot be used: parse failures, missing columns,
    /// invalid labels, degenerate datasets.
    #[error("data error: {0}")]
    Data(String),

    /// A computation could not produce a usable result: every candidate
    /// undefined, search found no scoreable configuration, and similar.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for the CLI: 1 usage/config, 2 data, 3 numerical.
    /// I/O problems count as data errors (the input could not be read).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Data(_) | Error::Io(_) => 2,
            Error::Numerical(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
