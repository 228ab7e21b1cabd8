//! Schrödinger operators arising from the second variation of the energy at
//! the uncoupled and symmetric states, their low eigenvalues, the resulting
//! stability signatures, and the coupling threshold where the symmetric
//! state first loses positivity.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ground_state::GroundState;
use crate::sturm::{inverse_iteration, kth_eigenvalue};
use crate::tridiag::{second_derivative_matrix, BoundaryCondition, TriDiag};

/// Eigenvalues below this count as genuinely negative when building
/// signatures; anything closer to zero is kernel noise inherited from the
/// profile solve.
pub const NEGATIVE_TOL: f64 = 1e-5;

/// Signatures count negative eigenvalues among this many lowest ones.
pub const SIGNATURE_DEPTH: usize = 5;

/// Bracket width in gamma below which the threshold search stops.
pub const GAMMA_WIDTH_TOL: f64 = 1e-4;

/// Which second-variation block to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `-eps^2 d_xx + x^2 - 1 + 3 eta^2`, the in-phase block.
    LPlus,
    /// `-eps^2 d_xx + x^2 - 1 + eta^2`, the phase block with kernel `eta`.
    LMinus,
    /// `-eps^2 d_xx + x^2 - 1 + eta^2 + 2 (1 - gamma) / (1 + gamma) eta^2`,
    /// the anti-phase block whose sign decides the wall bifurcation.
    LGamma,
}

impl OperatorKind {
    /// Coefficient of `eta^2` in the potential.
    fn eta2_coefficient(self, gamma: f64) -> f64 {
        match self {
            Self::LPlus => 3.0,
            Self::LMinus => 1.0,
            Self::LGamma => 1.0 + 2.0 * (1.0 - gamma) / (1.0 + gamma),
        }
    }
}

/// Full description of an operator to assemble: which block, at which scale
/// and coupling, with which closure at the origin, on which grid.
///
/// The right end is always a decay (Dirichlet) condition at the truncation.
/// A Neumann origin restricts to even perturbations, a Dirichlet origin to
/// odd ones; the two together make up the full-line problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub eps: f64,
    /// Used only by [`OperatorKind::LGamma`].
    pub gamma: f64,
    pub bc_left: BoundaryCondition,
    pub domain: Grid,
}

/// Low end of a spectrum: `k` requested eigenvalues in ascending order, the
/// inverse-iteration eigenvectors, and their relative residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub k: usize,
}

/// Negative-direction counts of the two states' diagonalized Hessian blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HessianSignatures {
    /// Uncoupled state `(eta, 0)`: (first block `L_plus`, second block with
    /// potential `x^2 - 1 + gamma eta^2`), full line.
    pub uncoupled: (usize, usize),
    /// Symmetric state: the rotation diagonalizes the block Hessian into
    /// `L_plus` and `L_gamma`; counts on the full line.
    pub symmetric_full: (usize, usize),
    /// `L_gamma` restricted to the odd wall sector (Dirichlet at the
    /// origin), the directions available to symmetry-breaking.
    pub symmetric_wall_sector: usize,
}

/// Discretizes the requested operator on the profile's grid.
pub fn assemble(spec: &OperatorSpec, eta: &GroundState) -> Result<TriDiag> {
    if spec.domain != eta.eta().grid() {
        return Err(Error::Parameter {
            name: "domain",
            message: "operator domain must be the profile grid".into(),
        });
    }
    if spec.eps != eta.eps() {
        return Err(Error::Parameter {
            name: "eps",
            message: format!(
                "operator eps {} differs from the profile eps {}",
                spec.eps,
                eta.eps()
            ),
        });
    }
    if spec.kind == OperatorKind::LGamma && !(spec.gamma > -1.0 && spec.gamma.is_finite()) {
        return Err(Error::Parameter {
            name: "gamma",
            message: format!("anti-phase block needs gamma > -1, got {}", spec.gamma),
        });
    }
    schroedinger(eta, spec.kind.eta2_coefficient(spec.gamma), spec.bc_left)
}

/// `eps^2` Laplacian plus the potential `x^2 - 1 + c eta^2` over the
/// unknowns selected by the origin closure.
fn schroedinger(eta: &GroundState, eta2_coeff: f64, left: BoundaryCondition) -> Result<TriDiag> {
    let grid = eta.eta().grid();
    if !grid.is_half_line() {
        return Err(Error::Parameter {
            name: "grid",
            message: "operators are assembled on half-line grids".into(),
        });
    }
    let mut m = second_derivative_matrix(&grid, left, BoundaryCondition::Dirichlet)?;
    m.scale(eta.eps() * eta.eps());
    let start = left.first_unknown();
    let potential: Vec<f64> = (start..grid.n() - 1)
        .map(|i| {
            let x = grid.node(i);
            let e = eta.eta().values()[i];
            x * x - 1.0 + eta2_coeff * e * e
        })
        .collect();
    m.add_diagonal(&potential)?;
    Ok(m)
}

/// The `k` smallest eigenvalues with eigenvectors, by Sturm bisection and
/// shifted inverse iteration.
pub fn low_eigenvalues(m: &TriDiag, k: usize) -> Result<EigenResult> {
    if k == 0 || k > m.n() {
        return Err(Error::Parameter {
            name: "k",
            message: format!("need 1 <= k <= {}, got {k}", m.n()),
        });
    }
    let mut eigenvalues = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for j in 0..k {
        let lambda = kth_eigenvalue(m.diag(), m.off(), j);
        let (v, r) = inverse_iteration(m, lambda)?;
        eigenvalues.push(lambda);
        vectors.push(v);
        residuals.push(r);
    }
    Ok(EigenResult {
        eigenvalues,
        vectors,
        residuals,
        k,
    })
}

/// The `k` smallest full-line eigenvalues of the block with the given
/// `eta^2` coefficient, merged from the even (Neumann) and odd (Dirichlet)
/// half-line problems.
fn full_line_lowest(eta: &GroundState, eta2_coeff: f64, k: usize) -> Result<Vec<f64>> {
    let even = schroedinger(eta, eta2_coeff, BoundaryCondition::Neumann)?;
    let odd = schroedinger(eta, eta2_coeff, BoundaryCondition::Dirichlet)?;
    let mut merged: Vec<f64> = (0..k)
        .flat_map(|j| {
            [
                kth_eigenvalue(even.diag(), even.off(), j),
                kth_eigenvalue(odd.diag(), odd.off(), j),
            ]
        })
        .collect();
    merged.sort_by(f64::total_cmp);
    merged.truncate(k);
    Ok(merged)
}

fn negatives(values: &[f64]) -> usize {
    values.iter().filter(|v| **v < -NEGATIVE_TOL).count()
}

/// Stability signatures of the uncoupled and symmetric states at the given
/// coupling: negative eigenvalues among the lowest [`SIGNATURE_DEPTH`] of
/// each diagonalized Hessian block.
pub fn classify_hessians(eps: f64, gamma: f64, eta: &GroundState) -> Result<HessianSignatures> {
    if eps != eta.eps() {
        return Err(Error::Parameter {
            name: "eps",
            message: format!(
                "classification eps {eps} differs from the profile eps {}",
                eta.eps()
            ),
        });
    }
    if !(gamma > -1.0 && gamma.is_finite()) {
        return Err(Error::Parameter {
            name: "gamma",
            message: format!("classification needs gamma > -1, got {gamma}"),
        });
    }
    let k = SIGNATURE_DEPTH;
    let l_plus = full_line_lowest(eta, 3.0, k)?;
    // Second variation of the uncoupled state in its vanishing component:
    // potential x^2 - 1 + gamma eta^2.
    let uncoupled_second = full_line_lowest(eta, gamma, k)?;
    let l_gamma_coeff = OperatorKind::LGamma.eta2_coefficient(gamma);
    let l_gamma_full = full_line_lowest(eta, l_gamma_coeff, k)?;
    let wall_sector = schroedinger(eta, l_gamma_coeff, BoundaryCondition::Dirichlet)?;
    let wall_lowest: Vec<f64> = (0..k)
        .map(|j| kth_eigenvalue(wall_sector.diag(), wall_sector.off(), j))
        .collect();
    Ok(HessianSignatures {
        uncoupled: (negatives(&l_plus), negatives(&uncoupled_second)),
        symmetric_full: (negatives(&l_plus), negatives(&l_gamma_full)),
        symmetric_wall_sector: negatives(&wall_lowest),
    })
}

/// Coupling at which the lowest odd-sector eigenvalue of the anti-phase
/// block crosses zero: beyond it the symmetric state has a wall-shaped
/// unstable direction.
///
/// Bisection in gamma; the lowest eigenvalue is strictly decreasing in
/// gamma, so a sign change over the bracket pins the crossing. Stops at
/// `|lambda| <= tol` or bracket width [`GAMMA_WIDTH_TOL`].
pub fn gamma_zero(eps: f64, eta: &GroundState, bracket: (f64, f64), tol: f64) -> Result<f64> {
    if eps != eta.eps() {
        return Err(Error::Parameter {
            name: "eps",
            message: format!(
                "threshold eps {eps} differs from the profile eps {}",
                eta.eps()
            ),
        });
    }
    let (mut lo, mut hi) = bracket;
    if !(lo > -1.0 && hi > lo) {
        return Err(Error::Parameter {
            name: "bracket",
            message: format!("need -1 < lo < hi, got [{lo}, {hi}]"),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Parameter {
            name: "tol",
            message: format!("tolerance must be positive, got {tol}"),
        });
    }
    let lowest = |gamma: f64| -> Result<f64> {
        let m = schroedinger(
            eta,
            OperatorKind::LGamma.eta2_coefficient(gamma),
            BoundaryCondition::Dirichlet,
        )?;
        Ok(kth_eigenvalue(m.diag(), m.off(), 0))
    };
    let f_lo = lowest(lo)?;
    let f_hi = lowest(hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f_mid = lowest(mid)?;
        if f_mid.abs() <= tol {
            return Ok(mid);
        }
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= GAMMA_WIDTH_TOL {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(mid)
}

/// Bifurcation function of the rotating family at coupling detuning
/// `delta`: `(delta / 4) sin(4 theta) int eta^4 dx`. Its simple zeros at
/// `theta = 0, pi/4, pi/2` are the states surviving the detuning.
#[must_use]
pub fn ls_constraint(theta: f64, delta: f64, eta: &GroundState) -> f64 {
    0.25 * delta * (4.0 * theta).sin() * eta.quartic_norm()
}
