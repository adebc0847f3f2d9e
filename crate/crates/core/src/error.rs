use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Hermite polynomial order {order} exceeds the direct-recurrence cap {max}; use the scaled Hermite function instead")]
    OrderTooLarge { order: usize, max: usize },

    #[error("grid box too small on axis {axis}: extent {extent}, need at least {needed}")]
    BoxTooSmall { axis: usize, extent: usize, needed: usize },

    #[error("axis {0} out of range (expected 1, 2 or 3)")]
    InvalidAxis(usize),

    #[error("spin label {0} out of range (expected 1 or 2)")]
    InvalidSpin(u8),

    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("{what} did not converge: refinement disagreement {disagreement:e} exceeds {limit:e}")]
    NonConvergence {
        what: &'static str,
        disagreement: f64,
        limit: f64,
    },

    #[error("quadrature rule construction failed: {0}")]
    Rule(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
