//! Symmetric tridiagonal matrices, the Thomas solve, and the second-derivative
//! stencil with Dirichlet or Neumann closure.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Relative pivot guard for [`thomas_solve`]: elimination aborts when a pivot
/// drops below this fraction of the largest diagonal entry.
pub const PIVOT_GUARD: f64 = 1e-14;

/// End condition for [`second_derivative_matrix`].
///
/// A Dirichlet end removes its boundary node from the unknowns; a Neumann end
/// keeps it, closing the stencil with a reflected ghost node. The ghost row is
/// made symmetric by the similarity that halves the boundary diagonal, which
/// scales the boundary entry of nodal vectors by sqrt(2) (see
/// [`to_symmetrized`] / [`from_symmetrized`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// Index of the first unknown node under this left-end condition.
    #[must_use]
    pub fn first_unknown(self) -> usize {
        match self {
            Self::Dirichlet => 1,
            Self::Neumann => 0,
        }
    }
}

/// Symmetric tridiagonal matrix stored as its diagonal and subdiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TriDiag {
    /// Wraps a diagonal of length `n` and an off-diagonal of length `n - 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Parameter {
                name: "tridiag",
                message: format!(
                    "diagonal length {} needs off-diagonal length {}, got {}",
                    diag.len(),
                    diag.len().saturating_sub(1),
                    off.len()
                ),
            });
        }
        Ok(Self { diag, off })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    #[must_use]
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    #[must_use]
    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Adds `w[i]` to diagonal entry `i`, e.g. to install a potential.
    pub fn add_diagonal(&mut self, w: &[f64]) -> Result<()> {
        if w.len() != self.diag.len() {
            return Err(Error::Parameter {
                name: "tridiag",
                message: format!(
                    "diagonal shift length {} on size {}",
                    w.len(),
                    self.diag.len()
                ),
            });
        }
        for (d, x) in self.diag.iter_mut().zip(w) {
            *d += x;
        }
        Ok(())
    }

    /// Scales every entry by `s`.
    pub fn scale(&mut self, s: f64) {
        for d in &mut self.diag {
            *d *= s;
        }
        for e in &mut self.off {
            *e *= s;
        }
    }

    /// Copy shifted to `A - s I`, as used by shifted inverse iteration.
    #[must_use]
    pub fn shifted(&self, s: f64) -> Self {
        let mut m = self.clone();
        for d in &mut m.diag {
            *d -= s;
        }
        m
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if v.len() != n {
            return Err(Error::Parameter {
                name: "tridiag",
                message: format!("vector length {} on size {}", v.len(), n),
            });
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            out[i] = s;
        }
        Ok(out)
    }
}

/// Solves the symmetric tridiagonal system `m x = rhs` by Thomas elimination.
///
/// Pivots are guarded relative to the largest diagonal entry; a pivot under
/// `PIVOT_GUARD * max|diag|` aborts with [`Error::SingularPivot`] instead of
/// amplifying noise through the back substitution.
pub fn thomas_solve(m: &TriDiag, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = m.n();
    if rhs.len() != n {
        return Err(Error::Parameter {
            name: "rhs",
            message: format!("length {} on size {}", rhs.len(), n),
        });
    }
    let scale = m.diag.iter().fold(0.0_f64, |a, d| a.max(d.abs()));
    let guard = PIVOT_GUARD * scale.max(f64::MIN_POSITIVE);

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = m.diag[0];
    if pivot.abs() < guard {
        return Err(Error::SingularPivot {
            row: 0,
            pivot,
            guard,
        });
    }
    if n > 1 {
        c[0] = m.off[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        let sub = m.off[i - 1];
        pivot = m.diag[i] - sub * c[i - 1];
        if pivot.abs() < guard {
            return Err(Error::SingularPivot {
                row: i,
                pivot,
                guard,
            });
        }
        if i + 1 < n {
            c[i] = m.off[i] / pivot;
        }
        d[i] = (rhs[i] - sub * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}

/// Discrete `-d^2/dx^2` on the interior of `grid` with the given end closures.
///
/// Rows are `(-v[i-1] + 2 v[i] - v[i+1]) / h^2`. Dirichlet ends drop their
/// boundary node, so the returned size is `grid.n()` minus one per Dirichlet
/// end. Neumann ends keep their node; reflecting the ghost node would give the
/// nonsymmetric corner row `(2 v[0] - 2 v[1]) / h^2`, which the boundary
/// rescaling turns into a symmetric corner with off-diagonal `-sqrt(2)/h^2`.
/// The matrix therefore acts on symmetrized coordinates; convert nodal data
/// with [`to_symmetrized`] and [`from_symmetrized`], or use [`apply_ghost`].
pub fn second_derivative_matrix(
    grid: &Grid,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<TriDiag> {
    let n = unknown_count(grid, left, right)?;
    if n == 2 && left == BoundaryCondition::Neumann && right == BoundaryCondition::Neumann {
        // Both corners would share the single off-diagonal entry.
        return Err(Error::Parameter {
            name: "grid",
            message: "two Neumann ends need at least 3 nodes".into(),
        });
    }
    let h2 = grid.h() * grid.h();
    let diag = vec![2.0 / h2; n];
    let mut off = vec![-1.0 / h2; n - 1];
    if !off.is_empty() {
        if left == BoundaryCondition::Neumann {
            off[0] = -std::f64::consts::SQRT_2 / h2;
        }
        if right == BoundaryCondition::Neumann {
            off[n - 2] = -std::f64::consts::SQRT_2 / h2;
        }
    }
    TriDiag::new(diag, off)
}

/// Number of unknowns `second_derivative_matrix` keeps for `grid`.
pub fn unknown_count(
    grid: &Grid,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<usize> {
    let removed = usize::from(left == BoundaryCondition::Dirichlet)
        + usize::from(right == BoundaryCondition::Dirichlet);
    let n = grid.n();
    if n < removed + 1 {
        return Err(Error::Parameter {
            name: "grid",
            message: format!("{n} nodes leave no unknowns for the stencil"),
        });
    }
    Ok(n - removed)
}

/// Rescales unknown-vector entries into the symmetrized coordinates of
/// [`second_derivative_matrix`]: Neumann boundary entries shrink by sqrt(2).
pub fn to_symmetrized(values: &mut [f64], left: BoundaryCondition, right: BoundaryCondition) {
    if values.is_empty() {
        return;
    }
    let inv = 1.0 / std::f64::consts::SQRT_2;
    if left == BoundaryCondition::Neumann {
        values[0] *= inv;
    }
    if right == BoundaryCondition::Neumann {
        *values.last_mut().expect("nonempty") *= inv;
    }
}

/// Inverse of [`to_symmetrized`]: Neumann boundary entries grow by sqrt(2).
pub fn from_symmetrized(values: &mut [f64], left: BoundaryCondition, right: BoundaryCondition) {
    if values.is_empty() {
        return;
    }
    let s = std::f64::consts::SQRT_2;
    if left == BoundaryCondition::Neumann {
        values[0] *= s;
    }
    if right == BoundaryCondition::Neumann {
        *values.last_mut().expect("nonempty") *= s;
    }
}

/// Applies the operator in nodal coordinates: scale in, multiply, scale out.
///
/// At interior rows this is the plain three-point stencil; at Neumann rows it
/// is the reflected-ghost row `(2 v[0] - 2 v[1]) / h^2`.
pub fn apply_ghost(
    m: &TriDiag,
    v: &[f64],
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<Vec<f64>> {
    let mut w = v.to_vec();
    to_symmetrized(&mut w, left, right);
    let mut out = m.apply(&w)?;
    from_symmetrized(&mut out, left, right);
    Ok(out)
}
