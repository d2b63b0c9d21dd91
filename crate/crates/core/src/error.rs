use thiserror::Error;

/// Errors raised by the numerical kernels and map constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The quantity is infinite (or zero) at this argument.
    #[error("divergence: {0}")]
    Divergence(String),

    /// A denominator or derivative vanished.
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// |g'| exceeded |h'| where a sense-preserving map was required.
    #[error("map is not sense-preserving at z = {re} + {im}i")]
    SenseReversal { re: f64, im: f64 },

    /// Adaptive integration ran out of subdivisions before reaching the target.
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// The operation has no closed form for this map.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Ray lifting hit a point where the Jacobian is not positive.
    #[error("singular ray lift: {0}")]
    Singular(String),

    /// Malformed map descriptor or configuration.
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
