//! Error type shared by every computation stage.

use thiserror::Error;

/// Errors reported by spectra, solvers, quadratures and the oracle.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An adaptive quadrature exhausted its subdivision budget before
    /// reaching the requested tolerance.
    #[error(
        "quadrature did not converge: estimated error {estimate:.3e} \
         exceeds tolerance {tolerance:.3e} after {intervals} intervals"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    /// The step-halving ladder of the Volterra solver ran out of refinement
    /// levels with the error estimate still above the requested tolerance.
    #[error(
        "solver did not converge: step-halving estimate {estimate:.3e} \
         exceeds tolerance {tolerance:.3e} at step {step:.3e}"
    )]
    SolverNonConvergence {
        estimate: f64,
        tolerance: f64,
        step: f64,
    },

    /// |G(t)| exceeded the instability bound, which signals a mis-specified
    /// memory kernel rather than physical behaviour.
    #[error("response unstable: |G({t:.3})| = {value:.3e} exceeds bound {bound:.3e}")]
    Instability { t: f64, value: f64, bound: f64 },

    /// The inverse Laplace transform could not certify the requested
    /// accuracy; the best value and its error bound are carried along.
    #[error(
        "inverse Laplace accuracy not reached at t = {t:.3}: best value \
         {value:.12e} with error bound {error:.3e} > requested {requested:.3e}"
    )]
    AccuracyNotReached {
        t: f64,
        value: f64,
        error: f64,
        requested: f64,
    },

    /// Grid-halving probe of the nonlinearity changed the result by more
    /// than the configured tolerance: the time grid is too coarse.
    #[error(
        "grid too coarse: halving the step changes eta by {change:.3e} \
         relative, tolerance {tolerance:.3e}"
    )]
    GridTooCoarse { change: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
