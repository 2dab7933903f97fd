use std::path::PathBuf;

/// Errors of the IO layer, the harness and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: {message}")]
    Malformed { origin: String, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] flathist_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(
        origin: impl std::fmt::Display,
        message: impl std::fmt::Display,
    ) -> Self {
        Error::Malformed {
            origin: origin.to_string(),
            message: message.to_string(),
        }
    }

    /// Process exit code for this error class.
    ///
    /// | code | class |
    /// |------|-------|
    /// | 2 | usage: bad or conflicting flags |
    /// | 3 | I/O failure |
    /// | 4 | malformed input file |
    /// | 5 | invalid experiment config |
    /// | 6 | invalid parameters or mismatched domains |
    /// | 7 | scale limit exceeded |
    /// | 8 | input outside the assumed class, or infeasible |
    pub fn exit_code(&self) -> i32 {
        use flathist_core::Error as C;
        match self {
            Error::Usage(_) => 2,
            Error::Io { .. } => 3,
            Error::Malformed { .. } => 4,
            Error::Config(_) => 5,
            Error::Core(C::ScaleLimit(_)) => 7,
            Error::Core(C::ClassViolation(_) | C::Infeasible(_)) => 8,
            Error::Core(_) => 6,
        }
    }
}
