//! The split function of half-line profiles and the shooting-style search
//! for the wall boundary value.
//!
//! A profile relaxed on the half-line with both components pinned to `alpha`
//! at the origin extends to a wall on the whole line through
//! `psi2(x) = psi1(-x)` exactly when the one-sided derivatives cancel:
//! `S(alpha) = psi1'(0+) + psi2'(0+) = 0`. The split function is evaluated
//! on relaxed profiles and its root traced in `alpha`, then continued in
//! `gamma`.

use crate::coupled::{solve_coupled, WallKind, WallProfile};
use crate::energetics::{energy_g, PhysParams};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Root tolerance on the split value.
pub const SPLIT_TOL: f64 = 1e-6;

/// Bracket width below which the search stops even if the split value has
/// not reached [`SPLIT_TOL`].
pub const ALPHA_TOL: f64 = 1e-4;

/// Default search bracket for the wall boundary value.
pub const DEFAULT_BRACKET: (f64, f64) = (0.2, 0.7);

/// One evaluated boundary value: the split, the profile energy, and how the
/// profile classified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    pub alpha: f64,
    pub s: f64,
    pub energy: f64,
    pub kind: Option<WallKind>,
    pub converged: bool,
}

impl SplitPoint {
    fn failed(alpha: f64) -> Self {
        Self {
            alpha,
            s: f64::NAN,
            energy: f64::NAN,
            kind: None,
            converged: false,
        }
    }
}

/// One-sided derivative at the first node, `(-3 f0 + 4 f1 - f2) / (2h)`.
fn one_sided_at_origin(values: &[f64], h: f64) -> f64 {
    (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
}

/// Relaxes the profile at `alpha` and evaluates its split value and energy.
pub fn split_function(
    p: &PhysParams,
    grid: Grid,
    alpha: f64,
    init: Option<&crate::grid::PairField>,
    tol: f64,
    max_iter: usize,
) -> Result<(SplitPoint, WallProfile)> {
    let profile = solve_coupled(p, grid, alpha, init, tol, max_iter)?;
    let h = grid.h();
    let s =
        one_sided_at_origin(profile.psi.first(), h) + one_sided_at_origin(profile.psi.second(), h);
    let energy = energy_g(&profile.psi, p)?.total;
    Ok((
        SplitPoint {
            alpha,
            s,
            energy,
            kind: Some(profile.kind),
            converged: profile.report.converged,
        },
        profile,
    ))
}

/// Scans the split function over `steps` evenly spaced boundary values,
/// warm-starting each relaxation from its neighbor.
///
/// Failed relaxations are recorded as unconverged rows rather than aborting
/// the scan.
pub fn alpha_scan(
    p: &PhysParams,
    grid: Grid,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<SplitPoint>> {
    if !(alpha_min > 0.0 && alpha_max > alpha_min) {
        return Err(Error::Parameter {
            name: "alpha",
            message: format!(
                "scan needs 0 < alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]"
            ),
        });
    }
    if steps < 2 {
        return Err(Error::Parameter {
            name: "steps",
            message: format!("scan needs at least 2 steps, got {steps}"),
        });
    }
    let mut rows = Vec::with_capacity(steps);
    let mut warm: Option<WallProfile> = None;
    for k in 0..steps {
        let alpha = alpha_min + (alpha_max - alpha_min) * k as f64 / (steps - 1) as f64;
        match split_function(p, grid, alpha, warm.as_ref().map(|w| &w.psi), tol, max_iter) {
            Ok((point, profile)) => {
                rows.push(point);
                warm = Some(profile);
            }
            Err(Error::NoConvergence { .. }) | Err(Error::SignIndefiniteDifference { .. }) => {
                rows.push(SplitPoint::failed(alpha));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

/// Finds the boundary value where the split function changes sign.
///
/// Bisection guarded by secant steps: the bracket never widens, and the
/// search stops once `|S| <= SPLIT_TOL` or the bracket is narrower than
/// [`ALPHA_TOL`]. The returned profile is the relaxed wall at the root.
pub fn find_wall_alpha(
    p: &PhysParams,
    grid: Grid,
    bracket: (f64, f64),
    tol: f64,
    max_iter: usize,
) -> Result<(SplitPoint, WallProfile)> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Parameter {
            name: "bracket",
            message: format!("need 0 < lo < hi, got [{lo}, {hi}]"),
        });
    }
    let (mut point_lo, profile_lo) = split_function(p, grid, lo, None, tol, max_iter)?;
    let mut warm = profile_lo;
    let (point_hi, profile_hi) = split_function(p, grid, hi, Some(&warm.psi), tol, max_iter)?;
    if point_lo.s.signum() == point_hi.s.signum() {
        return Err(Error::NoBracket {
            lo,
            hi,
            f_lo: point_lo.s,
            f_hi: point_hi.s,
        });
    }
    if point_lo.s.abs() <= SPLIT_TOL {
        return Ok((point_lo, warm));
    }
    if point_hi.s.abs() <= SPLIT_TOL {
        return Ok((point_hi, profile_hi));
    }
    let mut point_hi = point_hi;
    warm = profile_hi;

    // The bracket halves at least every other step, so convergence to
    // ALPHA_TOL from a unit bracket takes well under 80 iterations.
    for _ in 0..80 {
        let secant = point_lo.alpha
            - point_lo.s * (point_hi.alpha - point_lo.alpha) / (point_hi.s - point_lo.s);
        let width = hi - lo;
        let mut alpha = secant;
        // Reject secant steps that leave the bracket or hug an endpoint.
        if !(alpha > lo + 0.05 * width && alpha < hi - 0.05 * width) {
            alpha = 0.5 * (lo + hi);
        }
        let (point, profile) = split_function(p, grid, alpha, Some(&warm.psi), tol, max_iter)?;
        warm = profile;
        if point.s.abs() <= SPLIT_TOL {
            return Ok((point, warm));
        }
        if point.s.signum() == point_lo.s.signum() {
            lo = alpha;
            point_lo = point;
        } else {
            hi = alpha;
            point_hi = point;
        }
        if hi - lo <= ALPHA_TOL {
            // Return the endpoint with the smaller split magnitude.
            let best = if point_lo.s.abs() <= point_hi.s.abs() {
                point_lo
            } else {
                point_hi
            };
            let (point, profile) =
                split_function(p, grid, best.alpha, Some(&warm.psi), tol, max_iter)?;
            return Ok((point, profile));
        }
    }
    Err(Error::NoConvergence {
        iterations: 80,
        residual: point_lo.s.abs().min(point_hi.s.abs()),
        tol: SPLIT_TOL,
    })
}

/// Traces the wall boundary value across a list of couplings, warm-starting
/// each root search from the previous root.
///
/// Couplings where the search fails are recorded as unconverged rows. The
/// search bracket follows the previous root with a +-0.08 window, falling
/// back to [`DEFAULT_BRACKET`] for the first point.
pub fn gamma_continuation(
    eps: f64,
    gammas: &[f64],
    grid: Grid,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<(f64, SplitPoint)>> {
    if gammas.is_empty() {
        return Err(Error::Parameter {
            name: "gamma",
            message: "continuation needs at least one coupling".into(),
        });
    }
    let mut rows = Vec::with_capacity(gammas.len());
    let mut last_root: Option<f64> = None;
    for &gamma in gammas {
        let p = PhysParams::new(eps, gamma)?;
        let bracket = match last_root {
            Some(a) => ((a - 0.08).max(0.02), (a + 0.08).min(1.4)),
            None => DEFAULT_BRACKET,
        };
        match find_wall_alpha(&p, grid, bracket, tol, max_iter) {
            Ok((point, _)) => {
                last_root = Some(point.alpha);
                rows.push((gamma, point));
            }
            Err(Error::NoConvergence { .. })
            | Err(Error::NoBracket { .. })
            | Err(Error::SignIndefiniteDifference { .. }) => {
                rows.push((gamma, SplitPoint::failed(f64::NAN)));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}
