use thiserror::Error;

/// Errors raised by the library.
///
/// Divergent moments are *not* errors: they are reported through
/// [`crate::MomentStatus::Divergent`]. Inequality violations are not errors
/// either; they are recorded in [`crate::Verdict::holds`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("state does not provide {0}")]
    Capability(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("integrand returned a non-finite value at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("quadrature did not converge: value {value:e}, error estimate {err_estimate:e} after {evaluations} evaluations")]
    NotConverged {
        value: f64,
        err_estimate: f64,
        evaluations: usize,
    },

    #[error("envelope unknown: divergence cannot be classified by power counting")]
    UnknownEnvelope,

    #[error("eigendecomposition did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    EigenNotConverged { sweeps: usize, residual: f64 },

    #[error("operator is not Hermitian (max residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("expectation has imaginary residue {residue:e}")]
    ImaginaryExpectation { residue: f64 },

    #[error("radial grid too coarse: derivative error estimate {estimate:e} exceeds {tolerance:e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("moment {label} is divergent")]
    Divergent { label: String },

    #[error("moment {label} could not be evaluated")]
    Failed { label: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
