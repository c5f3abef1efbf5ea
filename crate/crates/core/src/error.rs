use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter a must be strictly positive (got {0}); a = 0 degenerates to Chebyshev polynomials")]
    NonPositiveParam(f64),

    #[error("{what}: expected {expected}, got {got}")]
    Domain {
        what: &'static str,
        expected: &'static str,
        got: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite values in {0}")]
    NonFinite(&'static str),

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("degenerate spectrum: eigenvalues {0} and {1} coincide")]
    DegenerateSpectrum(f64, f64),

    #[error("no change of inertia found for g in [0, {g_cap}]")]
    NoCrossing { g_cap: f64 },

    #[error("negative-eigenvalue count dropped from {before} to {after} between g = {g_lo} and g = {g_hi}")]
    NonMonotoneInertia {
        g_lo: f64,
        g_hi: f64,
        before: usize,
        after: usize,
    },
}
