//! The sharp-interface limit layer: the degenerate eigenvalue problem fixing
//! the bifurcation slope, the constrained wall profile at finite `mu`, the
//! explicit flat-background wall, and the pitchfork normal-form coefficient.

use std::time::Instant;

use crate::calculus::trapezoid;
use crate::error::{Error, Result};
use crate::grid::{Grid, PairField, ScalarField};
use crate::ground_state::SolveReport;
use crate::sturm::{kth_eigenvalue, matrix_scale};
use crate::tridiag::{
    from_symmetrized, second_derivative_matrix, thomas_solve, BoundaryCondition, TriDiag,
};

/// Pseudo-time step of the profile relaxation; the explicit restoring term
/// has slope at most one, so any step below one contracts.
const TIME_STEP: f64 = 0.4;

/// A profile within this distance of the constant branch collapses to it.
const CONSTANT_SNAP: f64 = 1e-6;

/// Coordinate system of the limit eigenvalue problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitCoordinate {
    /// `-((1 - x^2) v')' = nu (1 - x^2)^2 v` on (0, 1), Dirichlet at 0,
    /// natural closure at the degenerate end x = 1.
    XUnitInterval,
    /// The `x = tanh(xi)` image `-w'' = nu sech^6(xi) w` on a truncated
    /// half-line, Dirichlet at 0, Neumann at the truncation.
    XiHalfLine,
}

/// Lowest eigenpair of the limit problem.
///
/// The eigenfunction is stored in the coordinate it was solved in, vanishes
/// at the origin, is positive, and is normalized so that the weighted square
/// integral `int q v^2` equals one (`q = (1 - x^2)^2` or `sech^6 xi`).
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEigen {
    pub nu0: f64,
    pub v0: ScalarField,
    pub coordinate: LimitCoordinate,
    /// Relative residual of the generalized eigenpair.
    pub residual: f64,
}

/// Midpoint-flux discretization of `-(p u')'` on the tail nodes `1..=last`,
/// with Dirichlet at node 0 and zero flux past `last`.
fn flux_matrix(grid: &Grid, p: impl Fn(f64) -> f64, last: usize) -> Result<TriDiag> {
    let h = grid.h();
    let h2 = h * h;
    let m = last; // unknown nodes 1..=last
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m.saturating_sub(1)];
    for j in 0..m {
        let i = j + 1;
        let x = grid.node(i);
        let p_lo = p(x - 0.5 * h);
        let p_hi = if i == last { 0.0 } else { p(x + 0.5 * h) };
        diag[j] = (p_lo + p_hi) / h2;
        if j + 1 < m {
            off[j] = -p(x + 0.5 * h) / h2;
        }
    }
    TriDiag::new(diag, off)
}

/// Lowest generalized eigenpair `A v = nu Q v` with diagonal positive mass,
/// via Sturm bisection on the symmetrized quotient and inverse iteration on
/// the uniformly scaled pencil.
fn generalized_lowest(a: &TriDiag, q: &[f64]) -> Result<(f64, Vec<f64>, f64)> {
    let n = a.n();
    debug_assert_eq!(q.len(), n);
    // Symmetrize: C = Q^{-1/2} A Q^{-1/2}. The mass spans many orders of
    // magnitude for the sech^6 weight, but the Sturm count only divides by
    // guarded pivots, so the bisection stays exact.
    let inv_sqrt: Vec<f64> = q.iter().map(|x| 1.0 / x.sqrt()).collect();
    let c_diag: Vec<f64> = a
        .diag()
        .iter()
        .zip(&inv_sqrt)
        .map(|(d, s)| d * s * s)
        .collect();
    let c_off: Vec<f64> = a
        .off()
        .iter()
        .enumerate()
        .map(|(i, e)| e * inv_sqrt[i] * inv_sqrt[i + 1])
        .collect();
    let nu = kth_eigenvalue(&c_diag, &c_off, 0);

    // Inverse iteration on (A - sigma Q) w = Q w_prev keeps every entry at
    // the scale of A, unlike iterating on the symmetrized quotient.
    let scale = matrix_scale(a);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for attempt in 0..6 {
        let sigma = if attempt == 0 {
            nu
        } else {
            nu * (1.0 + 1e-12 * 10.0_f64.powi(attempt - 1)) + f64::MIN_POSITIVE
        };
        let mut shifted_diag = a.diag().to_vec();
        for (d, m) in shifted_diag.iter_mut().zip(q) {
            *d -= sigma * m;
        }
        let shifted = TriDiag::new(shifted_diag, a.off().to_vec())?;
        let mut v: Vec<f64> = (0..n)
            .map(|i| (1.7 * i as f64 + 0.3).sin() + 0.01)
            .collect();
        let mut failed = false;
        for _ in 0..4 {
            let rhs: Vec<f64> = v.iter().zip(q).map(|(x, m)| x * m).collect();
            match thomas_solve(&shifted, &rhs) {
                Ok(w) => {
                    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    v = w.into_iter().map(|x| x / norm).collect();
                }
                Err(Error::SingularPivot { .. }) => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            continue;
        }
        let av = a.apply(&v)?;
        let r = av
            .iter()
            .zip(v.iter().zip(q))
            .map(|(lhs, (x, m))| {
                let d = lhs - nu * m * x;
                d * d
            })
            .sum::<f64>()
            .sqrt()
            / scale;
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((v, r));
        }
        if best.as_ref().is_some_and(|(_, b)| *b <= 1e-12) {
            break;
        }
    }
    let (v, r) = best.ok_or(Error::NoConvergence {
        iterations: 6,
        residual: f64::INFINITY,
        tol: 1e-12,
    })?;
    Ok((nu, v, r))
}

/// Solves the limit eigenvalue problem for its lowest mode.
pub fn solve_nu0(coordinate: LimitCoordinate, grid: Grid) -> Result<LimitEigen> {
    if !grid.is_half_line() {
        return Err(Error::Parameter {
            name: "grid",
            message: "limit eigenproblem needs a grid starting at 0".into(),
        });
    }
    if grid.n() < 16 {
        return Err(Error::Parameter {
            name: "grid",
            message: format!(
                "limit eigenproblem needs at least 16 nodes, got {}",
                grid.n()
            ),
        });
    }
    match coordinate {
        LimitCoordinate::XUnitInterval => {
            if (grid.x_max() - 1.0).abs() > 1e-12 {
                return Err(Error::Parameter {
                    name: "grid",
                    message: format!(
                        "unit-interval form lives on [0, 1], got right end {}",
                        grid.x_max()
                    ),
                });
            }
            let n = grid.n();
            // The mass vanishes at x = 1; the zero-flux closure there makes
            // the last interior node carry the endpoint value, so the
            // eigenproblem is solved on nodes 1..n-2 and extended.
            let last = n - 2;
            let a = flux_matrix(&grid, |x| 1.0 - x * x, last)?;
            let q: Vec<f64> = (1..=last)
                .map(|i| {
                    let w = 1.0 - grid.node(i) * grid.node(i);
                    w * w
                })
                .collect();
            let (nu, y, residual) = generalized_lowest(&a, &q)?;
            let mut values = vec![0.0; n];
            for (j, v) in y.iter().enumerate() {
                values[j + 1] = *v;
            }
            values[n - 1] = values[n - 2];
            let v0 = finish_eigenfunction(grid, values, |x| {
                let w = 1.0 - x * x;
                w * w
            })?;
            Ok(LimitEigen {
                nu0: nu,
                v0,
                coordinate,
                residual,
            })
        }
        LimitCoordinate::XiHalfLine => {
            let b = second_derivative_matrix(
                &grid,
                BoundaryCondition::Dirichlet,
                BoundaryCondition::Neumann,
            )?;
            let sech6 = |xi: f64| {
                let s = 1.0 / xi.cosh();
                s.powi(6)
            };
            let q: Vec<f64> = (1..grid.n()).map(|i| sech6(grid.node(i))).collect();
            let (nu, y, residual) = generalized_lowest(&b, &q)?;
            // The pencil was solved in the symmetrized Neumann coordinates;
            // return to nodal values before normalizing.
            let mut w = y;
            from_symmetrized(
                &mut w,
                BoundaryCondition::Dirichlet,
                BoundaryCondition::Neumann,
            );
            let mut values = vec![0.0; grid.n()];
            values[1..].copy_from_slice(&w);
            let v0 = finish_eigenfunction(grid, values, sech6)?;
            Ok(LimitEigen {
                nu0: nu,
                v0,
                coordinate,
                residual,
            })
        }
    }
}

/// Orients the eigenfunction positive and normalizes `int q v^2 = 1`.
fn finish_eigenfunction(
    grid: Grid,
    mut values: Vec<f64>,
    q: impl Fn(f64) -> f64,
) -> Result<ScalarField> {
    if values.iter().sum::<f64>() < 0.0 {
        for v in &mut values {
            *v = -*v;
        }
    }
    let weighted: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| q(grid.node(i)) * v * v)
        .collect();
    let norm2 = trapezoid(&ScalarField::new(grid, weighted)?);
    let inv = 1.0 / norm2.sqrt();
    for v in &mut values {
        *v *= inv;
    }
    ScalarField::new(grid, values)
}

/// Critical rescaled width `mu0 = nu0^{-1/2}`: the pitchfork sits where the
/// domain half-width `1/mu` crosses it.
#[must_use]
pub fn mu_zero(le: &LimitEigen) -> f64 {
    1.0 / le.nu0.sqrt()
}

/// Relaxes the constrained wall angle on `[0, 1/mu]`:
/// `-((1 - (mu y)^2) u')' + (1/4) (1 - (mu y)^2)^2 sin(4u) = 0`, `u(0) = pi/4`,
/// zero flux at the degenerate end.
///
/// Returns the exact constant `pi/4` when the relaxation collapses onto the
/// constant branch, which is the only solution for `mu >= mu0`. Below `mu0`
/// the seed tilts the flow toward the increasing wall.
pub fn solve_limit_profile(
    mu: f64,
    grid: Grid,
    tol: f64,
    max_iter: usize,
) -> Result<(ScalarField, SolveReport)> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Parameter {
            name: "mu",
            message: format!("must be positive and finite, got {mu}"),
        });
    }
    let half_width = 1.0 / mu;
    if !grid.is_half_line() || (grid.x_max() - half_width).abs() > 1e-9 * (1.0 + half_width) {
        return Err(Error::Parameter {
            name: "grid",
            message: format!(
                "profile lives on [0, 1/mu] = [0, {half_width}], got [{}, {}]",
                grid.x_min(),
                grid.x_max()
            ),
        });
    }
    if grid.n() < 16 {
        return Err(Error::Parameter {
            name: "grid",
            message: format!("profile needs at least 16 nodes, got {}", grid.n()),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Parameter {
            name: "tol",
            message: format!("tolerance must be positive, got {tol}"),
        });
    }
    let start = Instant::now();
    let n = grid.n();
    let m = n - 1;
    let quarter = std::f64::consts::FRAC_PI_4;
    let p = |y: f64| (1.0 - (mu * y) * (mu * y)).max(0.0);

    let a = flux_matrix(&grid, p, m)?;
    // Lumped trapezoid mass: interior ones, one half at the free end.
    let mut mass = vec![1.0; m];
    mass[m - 1] = 0.5;
    let q: Vec<f64> = (1..=m)
        .map(|i| {
            let w = p(grid.node(i));
            w * w
        })
        .collect();
    let lift = p(0.5 * grid.h()) / (grid.h() * grid.h()) * quarter;

    let mut system = a.clone();
    system.scale(TIME_STEP);
    system.add_diagonal(&mass)?;

    // Seed on the increasing branch.
    let mut u: Vec<f64> = (0..n)
        .map(|i| quarter + 0.1 * (std::f64::consts::FRAC_PI_2 * mu * grid.node(i)).sin())
        .collect();
    u[0] = quarter;

    let residual_of = |u: &[f64]| -> Result<f64> {
        let au = a.apply(&u[1..])?;
        let mut worst = 0.0_f64;
        for j in 0..m {
            let mut r = au[j] + 0.25 * mass[j] * q[j] * (4.0 * u[j + 1]).sin();
            if j == 0 {
                r -= lift;
            }
            r /= mass[j];
            worst = worst.max(r.abs());
        }
        Ok(worst)
    };

    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    for k in 0..=max_iter {
        residual = residual_of(&u)?;
        if residual <= tol {
            converged = true;
            iterations = k;
            break;
        }
        if k == max_iter {
            iterations = k;
            break;
        }
        let mut rhs = vec![0.0; m];
        for j in 0..m {
            let v = u[j + 1];
            rhs[j] = mass[j] * (v - TIME_STEP * 0.25 * q[j] * (4.0 * v).sin());
        }
        rhs[0] += TIME_STEP * lift;
        let next = thomas_solve(&system, &rhs)?;
        u[1..].copy_from_slice(&next);
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            residual,
            tol,
        });
    }

    // The mirror wall solves the same problem; keep the increasing branch.
    if u[n - 1] < quarter {
        for v in &mut u[1..] {
            *v = std::f64::consts::FRAC_PI_2 - *v;
        }
        u[0] = quarter;
    }
    let deviation = u.iter().fold(0.0_f64, |w, v| w.max((v - quarter).abs()));
    if deviation <= CONSTANT_SNAP {
        u.fill(quarter);
    }

    Ok((
        ScalarField::new(grid, u)?,
        SolveReport {
            iterations,
            residual,
            converged,
            seconds: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Extends a half-line wall angle to the component pair on the mirrored
/// full line, using the exchange symmetry `theta1(-y) = theta2(y)` so the
/// symmetry holds bitwise.
pub fn full_line_wall(u: &ScalarField) -> Result<PairField> {
    let g = u.grid();
    if !g.is_half_line() {
        return Err(Error::Parameter {
            name: "grid",
            message: "wall extension starts from a half-line angle".into(),
        });
    }
    let quarter = std::f64::consts::FRAC_PI_4;
    if (u.values()[0] - quarter).abs() > 1e-12 {
        return Err(Error::Parameter {
            name: "theta",
            message: format!(
                "exchange symmetry needs the diagonal angle pi/4 at the origin, got {}",
                u.values()[0]
            ),
        });
    }
    let n = g.n();
    let full = Grid::new(-g.x_max(), g.x_max(), 2 * n - 1)?;
    let mut first = vec![0.0; 2 * n - 1];
    let mut second = vec![0.0; 2 * n - 1];
    // sin(u0) and cos(u0) can disagree in the last ulp even at u0 = pi/4;
    // pin the center to the exact diagonal so the mirror identity is bitwise.
    first[n - 1] = std::f64::consts::FRAC_1_SQRT_2;
    second[n - 1] = std::f64::consts::FRAC_1_SQRT_2;
    for i in 1..n {
        let (s, c) = u.values()[i].sin_cos();
        first[n - 1 + i] = s;
        second[n - 1 + i] = c;
        first[n - 1 - i] = c;
        second[n - 1 - i] = s;
    }
    PairField::new(full, first, second)
}

/// The explicit flat-background wall angle `u(y) = pi/2 - arctan(e^{-y})`,
/// evaluated as `arctan(e^y)` for stability at both tails.
pub fn explicit_wall(grid: Grid) -> Result<ScalarField> {
    if !grid.is_symmetric() {
        return Err(Error::Parameter {
            name: "grid",
            message: "the explicit wall is sampled on a symmetric grid".into(),
        });
    }
    Ok(ScalarField::from_fn(grid, explicit_wall_angle))
}

/// Pointwise explicit wall angle.
#[must_use]
pub fn explicit_wall_angle(y: f64) -> f64 {
    y.exp().atan()
}

/// Pitchfork coefficient
/// `delta2 = -(8/3) mu0^2 int (1-x^2) v0^4 dx / int (1-x^2) v0^2 dx`,
/// negative for a supercritical branch. The eigenfunction is re-normalized
/// to `int (1-x^2)^2 v0^2 dx = 1` first, which makes the value scale-free.
pub fn normal_form_delta2(le: &LimitEigen) -> Result<f64> {
    if le.coordinate != LimitCoordinate::XUnitInterval {
        return Err(Error::Parameter {
            name: "coordinate",
            message: "normal form needs the unit-interval eigenfunction".into(),
        });
    }
    let g = le.v0.grid();
    let weight = |x: f64| 1.0 - x * x;
    // Re-normalize defensively: users may hand back a rescaled copy.
    let stored: Vec<f64> = (0..g.n())
        .map(|i| {
            let x = g.node(i);
            let w = weight(x);
            w * w * le.v0.values()[i] * le.v0.values()[i]
        })
        .collect();
    let norm2 = trapezoid(&ScalarField::new(g, stored)?);
    let renorm = 1.0 / norm2.sqrt();

    let mut quartic = vec![0.0; g.n()];
    let mut quadratic = vec![0.0; g.n()];
    for i in 0..g.n() {
        let x = g.node(i);
        let w = weight(x);
        let v = le.v0.values()[i] * renorm;
        quartic[i] = w * v.powi(4);
        quadratic[i] = w * v * v;
    }
    let mu0 = mu_zero(le);
    let num = trapezoid(&ScalarField::new(g, quartic)?);
    let den = trapezoid(&ScalarField::new(g, quadratic)?);
    Ok(-(8.0 / 3.0) * mu0 * mu0 * num / den)
}

/// The small-`eps` bifurcation prediction `gamma = 1 + nu0 eps^2` per entry.
pub fn predicted_bifurcation_curve(eps_values: &[f64], nu0: f64) -> Result<Vec<(f64, f64)>> {
    if !(nu0 > 0.0 && nu0.is_finite()) {
        return Err(Error::Parameter {
            name: "nu0",
            message: format!("must be positive and finite, got {nu0}"),
        });
    }
    Ok(eps_values.iter().map(|&e| (e, 1.0 + nu0 * e * e)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_form_finds_the_known_eigenvalue() {
        let g = Grid::new(0.0, 1.0, 1025).unwrap();
        let le = solve_nu0(LimitCoordinate::XUnitInterval, g).unwrap();
        assert!(
            (le.nu0 - 7.29).abs() < 0.1,
            "lowest eigenvalue {} strayed from 7.29",
            le.nu0
        );
        assert!(le.residual <= 1e-8);
        assert_eq!(le.v0.values()[0], 0.0);
        // The eigenfunction is one-signed and normalized in the weighted
        // square integral.
        assert!(le.v0.values()[1..].iter().all(|&v| v > 0.0));
        let q: Vec<f64> = (0..g.n())
            .map(|i| {
                let w = 1.0 - g.node(i) * g.node(i);
                w * w * le.v0.values()[i] * le.v0.values()[i]
            })
            .collect();
        let norm = trapezoid(&ScalarField::new(g, q).unwrap());
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_quotient_reproduces_the_eigenvalue() {
        let g = Grid::new(0.0, 1.0, 513).unwrap();
        let le = solve_nu0(LimitCoordinate::XUnitInterval, g).unwrap();
        // (int (1-x^2) v'^2) / (int (1-x^2)^2 v^2) over the discrete pencil:
        // use the matrix quadratic forms to match the discrete eigenvalue
        // exactly.
        let last = g.n() - 2;
        let a = flux_matrix(&g, |x| 1.0 - x * x, last).unwrap();
        let v: Vec<f64> = le.v0.values()[1..=last].to_vec();
        let av = a.apply(&v).unwrap();
        let num: f64 = av.iter().zip(&v).map(|(x, y)| x * y).sum();
        let den: f64 = v
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let w = 1.0 - g.node(j + 1) * g.node(j + 1);
                w * w * x * x
            })
            .sum();
        let quotient = num / den;
        assert!(
            (quotient - le.nu0).abs() <= 1e-8 * le.nu0,
            "Rayleigh quotient {quotient} vs eigenvalue {}",
            le.nu0
        );
    }

    #[test]
    fn half_line_form_agrees_with_the_unit_interval_form() {
        let gx = Grid::new(0.0, 1.0, 2049).unwrap();
        let gxi = Grid::new(0.0, 10.0, 2049).unwrap();
        let ax = solve_nu0(LimitCoordinate::XUnitInterval, gx).unwrap();
        let axi = solve_nu0(LimitCoordinate::XiHalfLine, gxi).unwrap();
        let rel = (ax.nu0 - axi.nu0).abs() / ax.nu0;
        assert!(
            rel < 1e-3,
            "coordinate forms disagree: {} vs {}",
            ax.nu0,
            axi.nu0
        );
    }

    #[test]
    fn critical_width_is_the_inverse_root() {
        let g = Grid::new(0.0, 1.0, 64).unwrap();
        let dummy = ScalarField::from_fn(g, |_| 0.0);
        let le = LimitEigen {
            nu0: 4.0,
            v0: dummy.clone(),
            coordinate: LimitCoordinate::XUnitInterval,
            residual: 0.0,
        };
        assert_eq!(mu_zero(&le), 0.5);
        let le1 = LimitEigen { nu0: 1.0, ..le };
        assert_eq!(mu_zero(&le1), 1.0);
    }

    #[test]
    fn profile_collapses_to_the_constant_above_the_threshold() {
        let mu = 0.5;
        let g = Grid::new(0.0, 1.0 / mu, 513).unwrap();
        let (u, report) = solve_limit_profile(mu, g, 1e-10, 200_000).unwrap();
        assert!(report.converged);
        assert!(u.values().iter().all(|&v| v == std::f64::consts::FRAC_PI_4));
    }

    #[test]
    fn profile_breaks_symmetry_below_the_threshold() {
        let mu = 0.2;
        let g = Grid::new(0.0, 1.0 / mu, 513).unwrap();
        let (u, report) = solve_limit_profile(mu, g, 1e-10, 200_000).unwrap();
        assert!(report.converged);
        assert_eq!(u.values()[0], std::f64::consts::FRAC_PI_4);
        let dev = u.values().iter().fold(0.0_f64, |w, v| {
            w.max((v - std::f64::consts::FRAC_PI_4).abs())
        });
        assert!(dev > 0.05, "expected a genuine wall, deviation {dev}");
        // Monotone increasing toward the pure phase, up to relaxation noise
        // near the degenerate end where the flux weight vanishes.
        for w in u.values().windows(2) {
            assert!(
                w[1] >= w[0] - 1e-9,
                "angle not monotone: {} -> {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn profile_validates_the_domain() {
        assert!(solve_limit_profile(0.5, Grid::new(0.0, 3.0, 65).unwrap(), 1e-9, 100).is_err());
        assert!(solve_limit_profile(-0.5, Grid::new(0.0, 2.0, 65).unwrap(), 1e-9, 100).is_err());
    }

    #[test]
    fn full_line_extension_is_exactly_exchange_symmetric() {
        let mu = 0.2;
        let g = Grid::new(0.0, 5.0, 257).unwrap();
        let (u, _) = solve_limit_profile(mu, g, 1e-10, 200_000).unwrap();
        let wall = full_line_wall(&u).unwrap();
        let n = wall.grid().n();
        for i in 0..n {
            assert_eq!(wall.first()[i], wall.second()[n - 1 - i]);
        }
        // Center carries the diagonal value.
        let c = (n - 1) / 2;
        assert!((wall.first()[c] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn explicit_wall_passes_through_the_diagonal() {
        let g = Grid::new(-20.0, 20.0, 4097).unwrap();
        let u = explicit_wall(g).unwrap();
        let mid = (g.n() - 1) / 2;
        assert!((u.values()[mid] - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        // Stable evaluation form agrees with the textbook one.
        for y in [-5.0_f64, -0.3, 0.0, 1.2, 8.0] {
            let textbook = std::f64::consts::FRAC_PI_2 - (-y).exp().atan();
            assert!((explicit_wall_angle(y) - textbook).abs() <= 1e-15);
        }
        assert!(explicit_wall(Grid::new(0.0, 20.0, 65).unwrap()).is_err());
    }

    #[test]
    fn explicit_wall_residual_shrinks_at_second_order() {
        // -u'' + (1/4) sin(4u) vanishes identically for the explicit wall;
        // on the grid only the stencil error (h^2/12) max|u''''| ~ 0.76/12 h^2
        // remains.
        let residual = |n: usize| -> f64 {
            let g = Grid::new(-20.0, 20.0, n).unwrap();
            let u = explicit_wall(g).unwrap();
            let v = u.values();
            let h2 = g.h() * g.h();
            let mut worst = 0.0_f64;
            for i in 1..n - 1 {
                let upp = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
                worst = worst.max((-upp + 0.25 * (4.0 * v[i]).sin()).abs());
            }
            worst
        };
        let r8193 = residual(8193);
        assert!(r8193 <= 2e-6, "residual {r8193} at n = 8193");
        let r4097 = residual(4097);
        let ratio = r4097 / r8193;
        assert!(
            (3.5..4.5).contains(&ratio),
            "halving h should quarter the residual, got ratio {ratio}"
        );
    }

    #[test]
    fn normal_form_coefficient_is_negative_and_scale_free() {
        let g = Grid::new(0.0, 1.0, 1025).unwrap();
        let le = solve_nu0(LimitCoordinate::XUnitInterval, g).unwrap();
        let d2 = normal_form_delta2(&le).unwrap();
        assert!(d2 < 0.0, "pitchfork coefficient {d2} must be negative");
        // Doubling the stored eigenfunction must not move the value: the
        // formula re-normalizes internally.
        let doubled = LimitEigen {
            v0: ScalarField::new(g, le.v0.values().iter().map(|v| 2.0 * v).collect()).unwrap(),
            ..le.clone()
        };
        let d2_doubled = normal_form_delta2(&doubled).unwrap();
        assert!(
            (d2 - d2_doubled).abs() <= 1e-8 * d2.abs(),
            "scale leak: {d2} vs {d2_doubled}"
        );
        // Wrong coordinate is rejected.
        let gxi = Grid::new(0.0, 10.0, 257).unwrap();
        let xi = solve_nu0(LimitCoordinate::XiHalfLine, gxi).unwrap();
        assert!(normal_form_delta2(&xi).is_err());
    }

    #[test]
    fn predicted_curve_is_quadratic_in_eps() {
        let rows = predicted_bifurcation_curve(&[0.0, 0.1], 7.29).unwrap();
        assert_eq!(rows[0], (0.0, 1.0));
        assert!((rows[1].1 - 1.0729).abs() < 1e-12);
        // Inverse identity: eps = mu0 sqrt(gamma - 1).
        let mu0 = 1.0 / 7.29_f64.sqrt();
        let eps_back = mu0 * (rows[1].1 - 1.0).sqrt();
        assert!((eps_back - 0.1).abs() < 1e-12);
        assert!(predicted_bifurcation_curve(&[0.1], 0.0).is_err());
    }
}
