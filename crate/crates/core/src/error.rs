use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Variants are grouped so the command-line frontend can map them onto
/// exit codes: configuration and domain problems are the caller's fault,
/// accuracy and convergence problems mean a numerical routine could not
/// certify its own result.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("convergence error: {0}")]
    Convergence(String),

    #[error("normalization error: probabilities sum to {sum} (deviation {deviation:.3e})")]
    Normalization { sum: f64, deviation: f64 },

    #[error("envelope violated at (X1, X2) = ({x1}, {x2}): density/envelope ratio {ratio} exceeds bound {bound}")]
    EnvelopeViolation {
        x1: f64,
        x2: f64,
        ratio: f64,
        bound: f64,
    },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn accuracy(msg: impl Into<String>) -> Self {
        Error::Accuracy(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    /// Process exit code used by the command-line frontend.
    ///
    /// `2` for anything the user can fix by changing the configuration,
    /// `3` for numerical accuracy or convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Config(_)
            | Error::UnsupportedState(_)
            | Error::Dimension(_)
            | Error::Io(_) => 2,
            Error::Accuracy(_)
            | Error::Convergence(_)
            | Error::Normalization { .. }
            | Error::EnvelopeViolation { .. }
            | Error::NonFinite(_) => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
