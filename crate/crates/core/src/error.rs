use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not reach the requested increment within its term cap.
    #[error("series did not converge within {cap} terms")]
    TermCap { cap: usize },

    /// No evaluation route could certify the requested tolerance.
    #[error("tolerance {requested:e} not certified (best achievable bound {achieved:e})")]
    NotCertified { requested: f64, achieved: f64 },

    /// The right-hand side of an initial-value problem produced a non-finite value.
    #[error("non-finite right-hand side at step {step}")]
    NonFinite { step: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
