use std::fmt;

use crate::aberration::PhaseDomain;
use crate::grid::Basis;

pub type Result<T> = std::result::Result<T, Error>;

/// Last accepted iterate of a maximum-likelihood fit, attached to
/// non-convergence errors.
#[derive(Debug, Clone, PartialEq)]
pub struct FitIterate {
    /// `[ln A, mean_s, mean_i, ln L11, L21, ln L22]`
    pub params: [f64; 6],
    pub log_likelihood: f64,
    /// Gradient length in the Fisher metric.
    pub gradient_norm: f64,
}

impl fmt::Display for FitIterate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "params = {:?}, log-likelihood = {:.6e}, gradient = {:.3e}",
            self.params, self.log_likelihood, self.gradient_norm
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "grid too small: {leakage:.3e} of the probability lies within {cells} cells of the {basis} grid edge"
    )]
    GridTooSmall {
        basis: Basis,
        leakage: f64,
        cells: usize,
    },

    #[error("basis mismatch: expected {expected} basis, found {found}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("{profile} phase profile cannot act on a {state}-basis state; transform the state to the {wanted} basis first")]
    DomainMismatch {
        profile: PhaseDomain,
        state: Basis,
        wanted: Basis,
    },

    #[error("phase profile stores derivatives up to order {stored}, expansion requested to order {requested}")]
    InsufficientOrder { stored: usize, requested: usize },

    #[error("incompatible axes: {0}")]
    IncompatibleAxes(String),

    #[error("fit did not converge after {iterations} iterations ({last})")]
    NonConvergence { iterations: usize, last: FitIterate },

    #[error("singular fit: {0}")]
    SingularFit(String),

    #[error("unstable fit: {failures} of {resamples} Monte Carlo refits failed")]
    UnstableFit { failures: usize, resamples: usize },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("estimation failed: {0}")]
    EstimationFailed(String),
}
