//! Bisection eigenvalues of symmetric tridiagonal matrices through Sturm
//! pivot counts, plus shifted inverse iteration for eigenvectors.
//!
//! The pivot recurrence is guarded so that exact zeros become a tiny
//! negative pivot and near-zero pivots overflow harmlessly to infinity,
//! keeping the count monotone without branching on magnitudes.

use crate::error::{Error, Result};
use crate::tridiag::{thomas_solve, TriDiag};

/// Number of eigenvalues of the matrix strictly below `x`, by counting
/// negative pivots of the shifted LDL^T factorization.
pub(crate) fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let pivmin = pivot_floor(off);
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if q == 0.0 {
            q = -pivmin;
        }
        let b = off[i - 1];
        q = diag[i] - x - b * b / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest pivot magnitude the count ever divides by. Chosen so that
/// `b^2 / pivot_floor` stays finite for every off-diagonal entry `b`.
fn pivot_floor(off: &[f64]) -> f64 {
    let b2 = off.iter().fold(0.0_f64, |m, b| m.max(b * b));
    f64::MIN_POSITIVE * (1.0 + b2)
}

/// Interval certain to contain the whole spectrum, from Gershgorin discs.
pub(crate) fn spectrum_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < n - 1 {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
    (lo - pad, hi + pad)
}

/// The k-th eigenvalue (ascending, zero-based) by Sturm bisection.
pub(crate) fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let (mut lo, mut hi) = spectrum_bounds(diag, off);
    let pivmin = pivot_floor(off);
    for _ in 0..260 {
        let mid = 0.5 * (lo + hi);
        if count_below(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()) + pivmin {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for an eigenvalue already located by bisection, via inverse
/// iteration on a slightly perturbed shift. Returns the unit vector and the
/// residual `|A v - lambda v|_2` relative to the matrix scale.
pub(crate) fn inverse_iteration(m: &TriDiag, lambda: f64) -> Result<(Vec<f64>, f64)> {
    let n = m.n();
    let scale = matrix_scale(m);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for attempt in 0..6 {
        // First try the eigenvalue itself; the guarded solve usually
        // survives. On singular pivots back off by growing perturbations.
        let delta = if attempt == 0 {
            0.0
        } else {
            scale * 1e-14 * 10.0_f64.powi(attempt - 1)
        };
        let shifted = m.shifted(lambda + delta);
        // Deterministic full-support seed with no special symmetry.
        let mut v: Vec<f64> = (0..n)
            .map(|i| (1.7 * i as f64 + 0.3).sin() + 0.01)
            .collect();
        normalize(&mut v);
        let mut failed = false;
        for _ in 0..4 {
            match thomas_solve(&shifted, &v) {
                Ok(mut w) => {
                    normalize(&mut w);
                    v = w;
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
        orient(&mut v);
        let r = residual(m, &v, lambda) / scale;
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((v, r));
        }
        if best.as_ref().is_some_and(|(_, b)| *b <= 1e-12) {
            break;
        }
    }
    best.ok_or(Error::NoConvergence {
        iterations: 6,
        residual: f64::INFINITY,
        tol: 1e-12,
    })
}

pub(crate) fn matrix_scale(m: &TriDiag) -> f64 {
    let d = m.diag().iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let e = m.off().iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    (d + 2.0 * e).max(f64::MIN_POSITIVE)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v {
            *x /= norm;
        }
    }
}

/// Fixes the overall sign: the first entry of significant magnitude is made
/// positive, so repeated runs and refined grids orient alike.
fn orient(v: &mut [f64]) {
    let peak = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() >= 0.5 * peak) {
        if *first < 0.0 {
            for x in v {
                *x = -*x;
            }
        }
    }
}

fn residual(m: &TriDiag, v: &[f64], lambda: f64) -> f64 {
    let av = m.apply(v).expect("vector sized to matrix");
    av.iter()
        .zip(v)
        .map(|(a, x)| {
            let r = a - lambda * x;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}
