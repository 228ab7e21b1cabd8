//! Scalar ground state of the trapped cubic equation
//! `eps^2 eta'' + (1 - x^2 - eta^2) eta = 0`, solved on a truncated
//! half-line with even symmetry at the origin and decay at the far end.

use std::time::Instant;

use crate::calculus::trapezoid;
use crate::energetics::PhysParams;
use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::tridiag::{
    apply_ghost, from_symmetrized, second_derivative_matrix, thomas_solve, to_symmetrized,
    BoundaryCondition, TriDiag,
};

/// Pseudo-time step of the semi-implicit relaxation. The linear trap part is
/// treated implicitly, so the only stability constraint is the explicit cubic
/// term; with 0 < eta <= 1 any step below 1 contracts.
const TIME_STEP: f64 = 0.3;

/// Floor applied to the starting profile so the relaxation never starts from
/// an exact zero, where the iteration map has a spurious fixed point.
const INIT_FLOOR: f64 = 1e-3;

/// Convergence diagnostics of a relaxation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub seconds: f64,
}

/// Converged ground-state profile together with its solve diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    eps: f64,
    eta: ScalarField,
    report: SolveReport,
}

impl GroundState {
    #[must_use]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    #[must_use]
    pub fn eta(&self) -> &ScalarField {
        &self.eta
    }

    #[must_use]
    pub fn report(&self) -> SolveReport {
        self.report
    }

    /// Evaluates the profile at an arbitrary point by linear interpolation,
    /// extended evenly to x < 0 and by zero beyond the truncation.
    #[must_use]
    pub fn eval(&self, x: f64) -> f64 {
        let g = self.eta.grid();
        let r = x.abs();
        if r > g.x_max() {
            return 0.0;
        }
        let t = (r - g.x_min()) / g.h();
        let i = (t.floor() as usize).min(g.n() - 2);
        let frac = t - i as f64;
        let v = self.eta.values();
        v[i] + frac * (v[i + 1] - v[i])
    }

    /// L4 norm to the fourth power, `int eta^4 dx`, doubled onto the full
    /// line.
    #[must_use]
    pub fn quartic_norm(&self) -> f64 {
        let vals: Vec<f64> = self.eta.values().iter().map(|v| v.powi(4)).collect();
        let integrand = ScalarField::new(self.eta.grid(), vals).expect("same grid");
        2.0 * trapezoid(&integrand)
    }
}

/// Hard-wall limit profile `sqrt(max(1 - x^2, 0))`, the zeroth-order
/// approximation to the ground state.
#[must_use]
pub fn thomas_fermi(grid: Grid) -> ScalarField {
    ScalarField::from_fn(grid, |x| (1.0 - x * x).max(0.0).sqrt())
}

/// Relaxes the trapped cubic equation to its positive ground state.
///
/// The grid must be a half-line `[0, L]`; the origin carries the even
/// (Neumann) closure and the far end a decay (Dirichlet) condition. The
/// iteration `(I + tau (-eps^2 d_xx + x^2 - 1)) eta_next = eta - tau eta^3`
/// preserves positivity and stops once the pointwise equation residual falls
/// below `tol`.
pub fn solve_eta(p: &PhysParams, grid: Grid, tol: f64, max_iter: usize) -> Result<GroundState> {
    if !grid.is_half_line() {
        return Err(Error::Parameter {
            name: "grid",
            message: format!(
                "ground state needs a half-line grid, got x_min = {}",
                grid.x_min()
            ),
        });
    }
    if grid.n() < 8 {
        return Err(Error::Parameter {
            name: "grid",
            message: format!("ground state needs at least 8 nodes, got {}", grid.n()),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Parameter {
            name: "tol",
            message: format!("tolerance must be positive, got {tol}"),
        });
    }
    let start = Instant::now();
    let eps = p.eps;
    let eps2 = eps * eps;
    let n = grid.n();
    let m = n - 1; // Unknowns: nodes 0..n-2; the far node is pinned to zero.

    let left = BoundaryCondition::Neumann;
    let right = BoundaryCondition::Dirichlet;
    let mut system = second_derivative_matrix(&grid, left, right)?;
    system.scale(TIME_STEP * eps2);
    let shift: Vec<f64> = (0..m)
        .map(|i| {
            let x = grid.node(i);
            1.0 + TIME_STEP * (x * x - 1.0)
        })
        .collect();
    system.add_diagonal(&shift)?;

    // Full nodal vector including the pinned far node, so the ghost residual
    // can use the plain stencil everywhere.
    let mut eta: Vec<f64> = grid
        .nodes()
        .map(|x| (1.0 - x * x).max(0.0).sqrt().max(INIT_FLOOR))
        .collect();
    eta[n - 1] = 0.0;

    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let laplacian = second_derivative_matrix(&grid, left, right)?;
    for k in 0..=max_iter {
        residual = equation_residual(&laplacian, &grid, &eta, eps2);
        if residual <= tol {
            converged = true;
            iterations = k;
            break;
        }
        if k == max_iter {
            iterations = k;
            break;
        }
        let mut rhs: Vec<f64> = eta[..m]
            .iter()
            .map(|&v| v - TIME_STEP * v * v * v)
            .collect();
        to_symmetrized(&mut rhs, left, right);
        let mut next = thomas_solve(&system, &rhs)?;
        from_symmetrized(&mut next, left, right);
        eta[..m].copy_from_slice(&next);
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            residual,
            tol,
        });
    }

    let report = SolveReport {
        iterations,
        residual,
        converged,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok(GroundState {
        eps,
        eta: ScalarField::new(grid, eta)?,
        report,
    })
}

/// Pointwise residual of the discrete equation over the unknowns, using the
/// ghost row at the origin and the pinned zero at the far end.
fn equation_residual(laplacian: &TriDiag, grid: &Grid, eta: &[f64], eps2: f64) -> f64 {
    let m = laplacian.n();
    let lap = apply_ghost(
        laplacian,
        &eta[..m],
        BoundaryCondition::Neumann,
        BoundaryCondition::Dirichlet,
    )
    .expect("sizes fixed by construction");
    let mut worst = 0.0_f64;
    for (i, l) in lap.iter().enumerate() {
        let x = grid.node(i);
        let v = eta[i];
        // The row next to the pinned node already sees eta[m] = 0 implicitly:
        // the Dirichlet matrix simply has no coupling there.
        let r = eps2 * l + (x * x - 1.0 + v * v) * v;
        worst = worst.max(r.abs());
    }
    worst
}

/// Largest interior residual of the trapped cubic equation for an arbitrary
/// profile, using plain central differences on nodes 1..n-2.
pub fn eta_residual(eta: &ScalarField, eps: f64) -> Result<f64> {
    let v = eta.values();
    let n = v.len();
    if n < 3 {
        return Err(Error::Parameter {
            name: "field",
            message: format!("residual needs at least 3 nodes, got {n}"),
        });
    }
    let g = eta.grid();
    let h2 = g.h() * g.h();
    let eps2 = eps * eps;
    let mut worst = 0.0_f64;
    for i in 1..n - 1 {
        let x = g.node(i);
        let second = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
        let r = eps2 * second + (1.0 - x * x - v[i] * v[i]) * v[i];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
