//! Ground states, domain walls, and bifurcation analysis for a
//! harmonically trapped two-component condensate in one dimension.
//!
//! The crate solves the coupled cubic system
//! `-eps^2 psi'' + (x^2 - 1) psi1 + (psi1^2 + gamma psi2^2) psi1 = 0`
//! (and the component-swapped equation) on truncated half-lines, evaluates
//! the associated energy functionals together with their exact splitting
//! identities, and traces where the symmetric state loses stability to a
//! domain wall as the coupling `gamma` crosses its critical curve.

pub mod calculus;
pub mod coupled;
pub mod energetics;
pub mod error;
pub mod grid;
pub mod ground_state;
pub mod limit;
pub mod spectral;
pub mod split;
mod sturm;
pub mod tridiag;

pub use calculus::{central_gradient, trapezoid};
pub use coupled::{
    classify, coupled_residual, rotating_state, solve_coupled, solve_homogeneous_wall,
    symmetric_state, uncoupled_state, WallKind, WallProfile,
};
pub use energetics::{
    energy_f, energy_g, energy_i, energy_j, energy_j0, splitting_check, EnergyBreakdown,
    LimitVariant, PhysParams,
};
pub use error::{Error, Result};
pub use grid::{Grid, PairField, ScalarField};
pub use ground_state::{eta_residual, solve_eta, thomas_fermi, GroundState, SolveReport};
pub use limit::{
    explicit_wall, explicit_wall_angle, full_line_wall, mu_zero, normal_form_delta2,
    predicted_bifurcation_curve, solve_limit_profile, solve_nu0, LimitCoordinate, LimitEigen,
};
pub use spectral::{
    assemble, classify_hessians, gamma_zero, low_eigenvalues, ls_constraint, EigenResult,
    HessianSignatures, OperatorKind, OperatorSpec,
};
pub use split::{
    alpha_scan, find_wall_alpha, gamma_continuation, split_function, SplitPoint, ALPHA_TOL,
    DEFAULT_BRACKET, SPLIT_TOL,
};
pub use tridiag::{
    apply_ghost, from_symmetrized, second_derivative_matrix, thomas_solve, to_symmetrized,
    unknown_count, BoundaryCondition, TriDiag,
};
