//! Quadrature and differentiation on uniform grids, both second order.

use crate::error::{Error, Result};
use crate::grid::ScalarField;

/// Composite trapezoid rule over the whole grid.
#[must_use]
pub fn trapezoid(f: &ScalarField) -> f64 {
    let v = f.values();
    let n = v.len();
    let mut s = 0.5 * (v[0] + v[n - 1]);
    for x in &v[1..n - 1] {
        s += x;
    }
    s * f.grid().h()
}

/// Second-order gradient: central differences inside, one-sided
/// `(-3 f0 + 4 f1 - f2) / (2h)` stencils at both ends.
///
/// The end stencils are exact for quadratics, so endpoint derivatives carry
/// no extra order loss.
pub fn central_gradient(f: &ScalarField) -> Result<ScalarField> {
    let v = f.values();
    let n = v.len();
    if n < 3 {
        return Err(Error::Parameter {
            name: "field",
            message: format!("gradient needs at least 3 nodes, got {n}"),
        });
    }
    let two_h = 2.0 * f.grid().h();
    let mut g = vec![0.0; n];
    g[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / two_h;
    for i in 1..n - 1 {
        g[i] = (v[i + 1] - v[i - 1]) / two_h;
    }
    g[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / two_h;
    ScalarField::new(f.grid(), g)
}
