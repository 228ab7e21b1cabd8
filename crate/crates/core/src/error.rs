//! Error type shared by every solver and functional in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter failed validation before any numerics ran.
    #[error("invalid {name}: {message}")]
    Parameter { name: &'static str, message: String },

    /// The Thomas elimination hit a pivot below the singularity guard.
    #[error("singular pivot {pivot:e} at row {row} (guard {guard:e})")]
    SingularPivot { row: usize, pivot: f64, guard: f64 },

    /// A relaxation or eigenvalue loop ran out of iterations.
    #[error(
        "no convergence after {iterations} iterations: residual {residual:e} above tolerance {tol:e}"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    /// A constrained functional received a field off the unit circle.
    #[error(
        "unit-modulus constraint violated at node {index} (y = {y}): |theta|^2 = {value} deviates beyond 1e-8"
    )]
    ConstraintViolation { index: usize, y: f64, value: f64 },

    /// The component difference psi1 - psi2 changes sign in the interior,
    /// so the profile is neither symmetric nor ordered.
    #[error(
        "psi1 - psi2 changes sign at interior nodes (max above +{max_pos:e}, below -{max_neg:e})"
    )]
    SignIndefiniteDifference { max_pos: f64, max_neg: f64 },

    /// Too few nodes carry weight above the floor for a meaningful window.
    #[error(
        "weight window keeps {nodes} nodes above the floor {floor:e}; need at least {min_nodes}"
    )]
    DegenerateWindow {
        nodes: usize,
        floor: f64,
        min_nodes: usize,
    },

    /// A bracketing root or eigenvalue search was handed endpoints with the
    /// same sign.
    #[error("no sign change over [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}
