//! Uniform grids and the nodal fields that live on them.

use crate::error::{Error, Result};

/// Uniform grid of `n` nodes on `[x_min, x_max]`.
///
/// Node coordinates always come from the closed formula
/// `x_min + i * h`, never from cumulative summation, so grids built from the
/// same endpoints agree bitwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
}

impl Grid {
    /// Builds a grid with at least two nodes and strictly increasing endpoints.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::Parameter {
                name: "grid",
                message: format!("endpoints must be finite, got [{x_min}, {x_max}]"),
            });
        }
        if x_max <= x_min {
            return Err(Error::Parameter {
                name: "grid",
                message: format!("x_max must exceed x_min, got [{x_min}, {x_max}]"),
            });
        }
        if n < 2 {
            return Err(Error::Parameter {
                name: "grid",
                message: format!("need at least 2 nodes, got {n}"),
            });
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        Ok(Self { x_min, x_max, n, h })
    }

    /// Coordinate of node `i`.
    #[must_use]
    pub fn node(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn h(&self) -> f64 {
        self.h
    }

    #[must_use]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[must_use]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Iterates over all node coordinates.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    /// True when the grid starts at the origin, the convention for half-line
    /// problems closed with an even reflection.
    #[must_use]
    pub fn is_half_line(&self) -> bool {
        self.x_min == 0.0
    }

    /// True when the grid is mirror symmetric about the origin.
    #[must_use]
    pub fn is_symmetric(&self) -> bool {
        self.x_min < 0.0 && self.x_min == -self.x_max
    }

    /// Grid made of the first `count` nodes, keeping the spacing bitwise
    /// identical. Used to window integrals away from a degenerate weight.
    pub(crate) fn prefix(&self, count: usize) -> Result<Self> {
        if count < 2 || count > self.n {
            return Err(Error::Parameter {
                name: "grid",
                message: format!("prefix length {count} outside 2..={}", self.n),
            });
        }
        Ok(Self {
            x_min: self.x_min,
            x_max: self.node(count - 1),
            n: count,
            h: self.h,
        })
    }
}

/// Real scalar samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    /// Wraps nodal values, which must match the grid length.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::Parameter {
                name: "field",
                message: format!("{} values on a {}-node grid", values.len(), grid.n()),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    #[must_use]
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    #[must_use]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest absolute nodal value.
    #[must_use]
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Restriction to the first `count` nodes.
    pub(crate) fn restrict(&self, count: usize) -> Result<Self> {
        Ok(Self {
            grid: self.grid.prefix(count)?,
            values: self.values[..count].to_vec(),
        })
    }
}

/// Two real components sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PairField {
    grid: Grid,
    first: Vec<f64>,
    second: Vec<f64>,
}

impl PairField {
    /// Wraps two component vectors, both matching the grid length.
    pub fn new(grid: Grid, first: Vec<f64>, second: Vec<f64>) -> Result<Self> {
        if first.len() != grid.n() || second.len() != grid.n() {
            return Err(Error::Parameter {
                name: "field",
                message: format!(
                    "component lengths {} and {} on a {}-node grid",
                    first.len(),
                    second.len(),
                    grid.n()
                ),
            });
        }
        Ok(Self {
            grid,
            first,
            second,
        })
    }

    /// Samples both components at every node.
    #[must_use]
    pub fn from_fn(grid: Grid, f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            first: grid.nodes().map(&f1).collect(),
            second: grid.nodes().map(&f2).collect(),
        }
    }

    #[must_use]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[must_use]
    pub fn first(&self) -> &[f64] {
        &self.first
    }

    #[must_use]
    pub fn second(&self) -> &[f64] {
        &self.second
    }

    /// First component as an owned scalar field.
    #[must_use]
    pub fn first_field(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.first.clone(),
        }
    }

    /// Second component as an owned scalar field.
    #[must_use]
    pub fn second_field(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.second.clone(),
        }
    }

    /// Profile with the two components exchanged.
    #[must_use]
    pub fn swapped(&self) -> Self {
        Self {
            grid: self.grid,
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    /// Restriction to the first `count` nodes.
    pub(crate) fn restrict(&self, count: usize) -> Result<Self> {
        Ok(Self {
            grid: self.grid.prefix(count)?,
            first: self.first[..count].to_vec(),
            second: self.second[..count].to_vec(),
        })
    }
}
