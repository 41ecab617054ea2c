use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The fluctuation matrix has a negative eigenvalue, so the expansion
    /// point is not a minimum of the mean-field energy.
    #[error("fluctuation matrix is unstable: eigenvalue {eigenvalue:e} below clamp threshold")]
    Instability { eigenvalue: f64 },

    /// A numerical routine failed in a way that valid inputs should never trigger.
    #[error("internal numerical failure: {0}")]
    Internal(String),

    /// A configuration was rejected before any work was done.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
