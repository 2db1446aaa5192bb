use thiserror::Error;

/// Errors raised across the series, residual and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operands are structurally incompatible (e.g. expressions over different lengths).
    #[error("structural error: {0}")]
    Structural(String),
    /// The requested operation leaves the supported term basis.
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    /// An index or count is out of range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Invalid run configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// A numerical routine failed to produce a finite result.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Reading or writing an output file failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status: 2 for configuration problems, 3 for failures
    /// during the computation, 4 for file errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::OutOfRange(_) => 2,
            Error::Domain(_)
            | Error::Structural(_)
            | Error::UnsupportedBasis(_)
            | Error::Numerical(_) => 3,
            Error::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
