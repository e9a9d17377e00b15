use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A parameter set violates a model invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature on [{a}, {b}] did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    NoConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
