use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates the operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// A quantum number or parameter outside the supported domain.
    #[error("outside domain: {0}")]
    Domain(String),
    /// A numerical procedure failed (singular system, fit non-convergence).
    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        /// Best-so-far parameter vector, when a minimizer gave up.
        best: Vec<f64>,
        /// Residual norm at `best`.
        residual: f64,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical { message: msg.into(), best: Vec::new(), residual: f64::NAN }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
