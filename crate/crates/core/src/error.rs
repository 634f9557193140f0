use thiserror::Error;

use crate::cavity::Response;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation has no closed form for the requested input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Refining the angular grid still moved the result by more than the
    /// requested tolerance. `estimate` is the value on the finest grid tried.
    #[error("quadrature did not converge: change {change:.3e} exceeds tolerance {tolerance:.3e} at {n_polar}x{n_azimuth} nodes")]
    NonConvergence {
        estimate: Response,
        change: f64,
        tolerance: f64,
        n_polar: usize,
        n_azimuth: usize,
    },

    /// The steady-state excited population is too large for the
    /// weak-excitation model.
    #[error("weak-excitation limit violated: excited population {0:.4} > 0.1")]
    WeakExcitation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
