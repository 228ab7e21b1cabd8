//! Shared test oracle: a dense cyclic Jacobi eigensolver with no code in
//! common with the library's Sturm bisection and inverse iteration path.

/// Eigenvalues of a symmetric dense matrix, ascending, by cyclic Jacobi
/// rotations. Convergence is driven to roundoff relative to the largest
/// entry, so the results serve as ground truth at 1e-12 scale.
#[allow(clippy::needless_range_loop)] // two-sided rotations touch rows p, q, and k at once
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0_f64, |w, v| w.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for _sweep in 0..200 {
        let mut off2 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off2 += a[p][q] * a[p][q];
            }
        }
        if off2.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for row in a.iter_mut() {
                    let (rp, rq) = (row[p], row[q]);
                    row[p] = c * rp - s * rq;
                    row[q] = s * rp + c * rq;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Dense copy of a symmetric tridiagonal matrix given its two bands.
#[allow(dead_code)] // not every suite that includes the oracle needs it
pub fn dense_from_bands(diag: &[f64], off: &[f64]) -> Vec<Vec<f64>> {
    let n = diag.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
        if i + 1 < n {
            a[i][i + 1] = off[i];
            a[i + 1][i] = off[i];
        }
    }
    a
}
