//! Error type shared by the whole crate.

/// Errors reported by mesh construction, material evaluation, solvers and
/// audits. Numerical *reports* (residual magnitudes) are not errors; only
/// violated preconditions, invalid configuration and non-convergence are.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar argument is outside its admissible range (h ≤ 0, γ ≤ 0, …).
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter {
        name: &'static str,
        message: String,
    },

    /// Scenario configuration is inconsistent (fractions, h list, periods, …).
    #[error("configuration error: {0}")]
    Config(String),

    /// Field dimensions do not match the mesh or each other.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A mathematical precondition was violated (non-deviatoric direction,
    /// non-tangent jump vector, inadmissible stress handed to an audit, …).
    #[error("constraint violation: {0}")]
    Constraint(String),

    /// The layer grid does not support the requested moment decomposition.
    #[error("unsupported grid: {0}")]
    UnsupportedGrid(String),

    /// Evaluation time outside the boundary datum's profile range.
    #[error("time {t} outside the datum range [0, {t_end}]")]
    TimeOutOfRange { t: f64, t_end: f64 },

    /// The discrete system could not be assembled (degenerate operator).
    #[error("assembly error: {0}")]
    Assembly(String),

    /// An iterative solve exhausted its budget.
    #[error("{context}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        context: String,
        iterations: usize,
        residual: f64,
    },

    /// I/O failure while reading rasters, configs or state files.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
