use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible state: {0}")]
    Inadmissible(String),

    /// A pointwise state lost positivity of density or pressure during a run.
    #[error("hyperbolicity lost at cell {cell}, step {step}: {detail}")]
    HyperbolicityLoss {
        cell: usize,
        step: usize,
        detail: String,
    },

    #[error("dual solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("moment vector is not realizable: {0}")]
    NonRealizable(String),

    #[error("non-finite value at cell {cell}, step {step}")]
    NonFinite { cell: usize, step: usize },

    /// A deterministic solve of the collocation reference failed.
    #[error("collocation node {node} (ξ = {xi}): {source}")]
    Collocation {
        node: usize,
        xi: f64,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach cell and step information to errors coming out of a per-cell
    /// computation.
    pub(crate) fn at(self, cell: usize, step: usize) -> Self {
        match self {
            Error::Inadmissible(detail) => Error::HyperbolicityLoss { cell, step, detail },
            other => other,
        }
    }
}
