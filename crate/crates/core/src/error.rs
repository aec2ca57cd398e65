use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("bad degree: {0}")]
    BadDegree(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature gave up before reaching the requested tolerance.
    /// The best available value and its error estimate are preserved.
    #[error("tolerance not met: value {value}, error estimate {err_est} (requested {requested})")]
    ToleranceNotMet {
        value: f64,
        err_est: f64,
        requested: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Reading or writing experiment files failed.
    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
