//! Energy functionals of the trapped pair, the scalar reference energy, the
//! rescaled wall energies, and the exact splitting identity relating them.
//!
//! Every functional carries a global 1/2 in front of its integral. Fields on
//! half-line grids are doubled onto the full line; fields on symmetric grids
//! integrate as they stand. Any other grid is rejected.

use crate::calculus::{central_gradient, trapezoid};
use crate::error::{Error, Result};
use crate::grid::{Grid, PairField, ScalarField};
use crate::ground_state::GroundState;

/// Nodes whose weight falls below this floor are cut from the splitting
/// window, where dividing by the weight would amplify tail noise.
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Minimum node count for a meaningful splitting window.
pub const MIN_WINDOW_NODES: usize = 10;

/// Unit-modulus deviation allowed by the constrained limit energies.
pub const MODULUS_TOL: f64 = 1e-8;

/// Physical parameters of the coupled system.
///
/// `eps` scales the kinetic term, `gamma` couples the components, and `mu`
/// optionally records the rescaled wall parameter tied to `eps` through
/// `eps = mu * sqrt(gamma - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub eps: f64,
    pub gamma: f64,
    pub mu: Option<f64>,
}

impl PhysParams {
    /// Plain parameters without a rescaled `mu`.
    pub fn new(eps: f64, gamma: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Parameter {
                name: "eps",
                message: format!("must be positive and finite, got {eps}"),
            });
        }
        if !(gamma.is_finite() && gamma > -1.0) {
            return Err(Error::Parameter {
                name: "gamma",
                message: format!("must be finite and exceed -1, got {gamma}"),
            });
        }
        Ok(Self {
            eps,
            gamma,
            mu: None,
        })
    }

    /// Parameters carrying an explicit `mu`.
    pub fn with_mu(eps: f64, gamma: f64, mu: f64) -> Result<Self> {
        let mut p = Self::new(eps, gamma)?;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Parameter {
                name: "mu",
                message: format!("must be positive and finite, got {mu}"),
            });
        }
        p.mu = Some(mu);
        Ok(p)
    }

    /// Parameters on the wall scale: `eps = mu * sqrt(gamma - 1)`, which
    /// requires `gamma > 1`.
    pub fn rescaled(mu: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Parameter {
                name: "gamma",
                message: format!("rescaled parameters need gamma > 1, got {gamma}"),
            });
        }
        Self::with_mu(mu * (gamma - 1.0).sqrt(), gamma, mu)
    }
}

/// Energy of a two-component field, split into its four parts:
/// kinetic `(1/2) int eps^2 |Psi'|^2`, trap `(1/2) int (x^2 - 1) |Psi|^2`,
/// quartic `(1/4) int |Psi|^4`, coupling `(1/2)(gamma - 1) int psi1^2 psi2^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub trap: f64,
    pub quartic: f64,
    pub coupling: f64,
    pub total: f64,
}

/// 2 on half-line grids (even reflection), 1 on symmetric grids.
fn symmetry_factor(grid: Grid) -> Result<f64> {
    if grid.is_half_line() {
        Ok(2.0)
    } else if grid.is_symmetric() {
        Ok(1.0)
    } else {
        Err(Error::Parameter {
            name: "grid",
            message: format!(
                "energies need a half-line or symmetric grid, got [{}, {}]",
                grid.x_min(),
                grid.x_max()
            ),
        })
    }
}

fn integrate(grid: Grid, values: Vec<f64>) -> f64 {
    trapezoid(&ScalarField::new(grid, values).expect("integrand sized to grid"))
}

/// Trap-scaled energy of the pair `Psi = (psi1, psi2)`.
pub fn energy_g(psi: &PairField, p: &PhysParams) -> Result<EnergyBreakdown> {
    let grid = psi.grid();
    let fac = symmetry_factor(grid)?;
    let g1 = central_gradient(&psi.first_field())?;
    let g2 = central_gradient(&psi.second_field())?;
    let eps2 = p.eps * p.eps;
    let n = grid.n();

    let mut kin = vec![0.0; n];
    let mut trap = vec![0.0; n];
    let mut quart = vec![0.0; n];
    let mut coup = vec![0.0; n];
    for i in 0..n {
        let x = grid.node(i);
        let (a, b) = (psi.first()[i], psi.second()[i]);
        let (da, db) = (g1.values()[i], g2.values()[i]);
        let dens = a * a + b * b;
        kin[i] = eps2 * (da * da + db * db);
        trap[i] = (x * x - 1.0) * dens;
        quart[i] = dens * dens;
        coup[i] = a * a * b * b;
    }
    let kinetic = 0.5 * fac * integrate(grid, kin);
    let trap = 0.5 * fac * integrate(grid, trap);
    let quartic = 0.25 * fac * integrate(grid, quart);
    let coupling = 0.5 * fac * (p.gamma - 1.0) * integrate(grid, coup);
    Ok(EnergyBreakdown {
        kinetic,
        trap,
        quartic,
        coupling,
        total: kinetic + trap + quartic + coupling,
    })
}

/// Scalar reference energy
/// `(1/2) int eps^2 (eta')^2 + (x^2 - 1) eta^2 + eta^4 / 2`.
pub fn energy_f(eta: &ScalarField, p: &PhysParams) -> Result<f64> {
    let grid = eta.grid();
    let fac = symmetry_factor(grid)?;
    let d = central_gradient(eta)?;
    let eps2 = p.eps * p.eps;
    let vals: Vec<f64> = (0..grid.n())
        .map(|i| {
            let x = grid.node(i);
            let v = eta.values()[i];
            let dv = d.values()[i];
            eps2 * dv * dv + (x * x - 1.0) * v * v + 0.5 * v.powi(4)
        })
        .collect();
    Ok(0.5 * fac * integrate(grid, vals))
}

/// Weighted wall energy of a ratio field `Phi` on the stretched coordinate
/// `z = x / eps`, with weight `eta(eps z)`:
/// `(1/2) int w^2 |Phi'|^2 + w^4 (|Phi|^2 - 1)^2 / 2
///  + (gamma - 1) w^4 phi1^2 phi2^2 dz`.
pub fn energy_j(phi: &PairField, p: &PhysParams, eta: &GroundState) -> Result<f64> {
    weighted_wall_energy(phi, p, |z| eta.eval(p.eps * z))
}

/// Wall energy with unit weight, the flat-background limit of [`energy_j`].
pub fn energy_j0(phi: &PairField, p: &PhysParams) -> Result<f64> {
    weighted_wall_energy(phi, p, |_| 1.0)
}

fn weighted_wall_energy(
    phi: &PairField,
    p: &PhysParams,
    weight: impl Fn(f64) -> f64,
) -> Result<f64> {
    let grid = phi.grid();
    let fac = symmetry_factor(grid)?;
    let g1 = central_gradient(&phi.first_field())?;
    let g2 = central_gradient(&phi.second_field())?;
    let vals: Vec<f64> = (0..grid.n())
        .map(|i| {
            let w = weight(grid.node(i));
            let w2 = w * w;
            let (a, b) = (phi.first()[i], phi.second()[i]);
            let (da, db) = (g1.values()[i], g2.values()[i]);
            let excess = a * a + b * b - 1.0;
            w2 * (da * da + db * db)
                + w2 * w2 * (0.5 * excess * excess + (p.gamma - 1.0) * a * a * b * b)
        })
        .collect();
    Ok(0.5 * fac * integrate(grid, vals))
}

/// Checks the exact energy splitting `G(Psi) = F(eta) + eps J(Psi / eta)`.
///
/// The identity holds on the region where the reference profile is positive;
/// nodes with `eta < WEIGHT_FLOOR` are windowed away before dividing, and the
/// remaining window must keep at least [`MIN_WINDOW_NODES`] nodes. Returns
/// the absolute defect `|G - F - eps J|` over the window.
pub fn splitting_check(psi: &PairField, p: &PhysParams, eta: &GroundState) -> Result<f64> {
    let grid = psi.grid();
    if grid != eta.eta().grid() {
        return Err(Error::Parameter {
            name: "grid",
            message: "pair field and reference profile must share one grid".into(),
        });
    }
    if !grid.is_half_line() {
        return Err(Error::Parameter {
            name: "grid",
            message: "splitting check needs a half-line grid".into(),
        });
    }
    let count = eta
        .eta()
        .values()
        .iter()
        .take_while(|&&v| v >= WEIGHT_FLOOR)
        .count();
    if count < MIN_WINDOW_NODES {
        return Err(Error::DegenerateWindow {
            nodes: count,
            floor: WEIGHT_FLOOR,
            min_nodes: MIN_WINDOW_NODES,
        });
    }

    let psi_w = psi.restrict(count)?;
    let eta_w = eta.eta().restrict(count)?;
    let total = energy_g(&psi_w, p)?.total;
    let scalar = energy_f(&eta_w, p)?;

    let z_grid = Grid::new(0.0, grid.node(count - 1) / p.eps, count)?;
    let ratio1: Vec<f64> = psi_w
        .first()
        .iter()
        .zip(eta_w.values())
        .map(|(a, w)| a / w)
        .collect();
    let ratio2: Vec<f64> = psi_w
        .second()
        .iter()
        .zip(eta_w.values())
        .map(|(b, w)| b / w)
        .collect();
    let phi = PairField::new(z_grid, ratio1, ratio2)?;
    let wall = energy_j(&phi, p, eta)?;

    Ok((total - scalar - p.eps * wall).abs())
}

/// Which limit of the rescaled wall energy to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVariant {
    /// Full rescaled energy at `eps = mu sqrt(gamma - 1)`: penalized modulus,
    /// weight `eta(eps y)`. Needs `mu`, `gamma > 1`, and a reference profile.
    MuGamma,
    /// Constrained `gamma -> 1` limit: `|Theta| = 1` enforced, weight is the
    /// hard-wall profile `eta0(mu y)`. Needs `mu`.
    MuOne,
    /// Flat `mu -> 0` limit: `|Theta| = 1` enforced, unit weight.
    ZeroOne,
}

/// Rescaled wall energy of a two-component angle field `Theta`.
pub fn energy_i(
    theta: &PairField,
    p: &PhysParams,
    eta: Option<&GroundState>,
    variant: LimitVariant,
) -> Result<f64> {
    match variant {
        LimitVariant::ZeroOne => {
            check_unit_modulus(theta, None)?;
            constrained_energy(theta, |_| 1.0)
        }
        LimitVariant::MuOne => {
            let mu = require_mu(p)?;
            check_unit_modulus(theta, Some(1.0 / mu))?;
            constrained_energy(theta, |y| (1.0 - (mu * y) * (mu * y)).max(0.0).sqrt())
        }
        LimitVariant::MuGamma => {
            let mu = require_mu(p)?;
            if p.gamma <= 1.0 {
                return Err(Error::Parameter {
                    name: "gamma",
                    message: format!("penalized wall energy needs gamma > 1, got {}", p.gamma),
                });
            }
            let eta = eta.ok_or(Error::Parameter {
                name: "eta",
                message: "penalized wall energy needs the reference profile".into(),
            })?;
            let expected = mu * (p.gamma - 1.0).sqrt();
            if (p.eps - expected).abs() > 1e-9 * (1.0 + p.eps)
                || (eta.eps() - expected).abs() > 1e-9 * (1.0 + p.eps)
            {
                return Err(Error::Parameter {
                    name: "eps",
                    message: format!(
                        "wall scale requires eps = mu sqrt(gamma - 1) = {expected}, got eps = {} with profile at {}",
                        p.eps,
                        eta.eps()
                    ),
                });
            }
            penalized_energy(theta, p, eta)
        }
    }
}

fn require_mu(p: &PhysParams) -> Result<f64> {
    p.mu.ok_or(Error::Parameter {
        name: "mu",
        message: "rescaled wall energies need mu".into(),
    })
}

/// Rejects fields off the unit circle, reporting the worst node. When
/// `inside` is given, only nodes with `|y| < inside` are constrained; the
/// weight vanishes beyond and the field there is immaterial.
fn check_unit_modulus(theta: &PairField, inside: Option<f64>) -> Result<()> {
    let grid = theta.grid();
    let mut worst: Option<(usize, f64, f64)> = None;
    for i in 0..grid.n() {
        let y = grid.node(i);
        if let Some(bound) = inside {
            if y.abs() >= bound {
                continue;
            }
        }
        let m = theta.first()[i] * theta.first()[i] + theta.second()[i] * theta.second()[i];
        let dev = (m - 1.0).abs();
        if dev > MODULUS_TOL && worst.is_none_or(|(_, _, w)| dev > w) {
            worst = Some((i, m, dev));
        }
    }
    match worst {
        Some((index, value, _)) => Err(Error::ConstraintViolation {
            index,
            y: grid.node(index),
            value,
        }),
        None => Ok(()),
    }
}

/// `(1/2) int w^2 |Theta'|^2 + w^4 theta1^2 theta2^2` for unit-modulus fields.
fn constrained_energy(theta: &PairField, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let grid = theta.grid();
    let fac = symmetry_factor(grid)?;
    let g1 = central_gradient(&theta.first_field())?;
    let g2 = central_gradient(&theta.second_field())?;
    let vals: Vec<f64> = (0..grid.n())
        .map(|i| {
            let w = weight(grid.node(i));
            let w2 = w * w;
            let (a, b) = (theta.first()[i], theta.second()[i]);
            let (da, db) = (g1.values()[i], g2.values()[i]);
            w2 * (da * da + db * db) + w2 * w2 * a * a * b * b
        })
        .collect();
    Ok(0.5 * fac * integrate(grid, vals))
}

/// Full penalized wall energy with the modulus term
/// `(|Theta|^2 - 1)^2 / (2 (gamma - 1))` and weight `eta(eps y)`.
fn penalized_energy(theta: &PairField, p: &PhysParams, eta: &GroundState) -> Result<f64> {
    let grid = theta.grid();
    let fac = symmetry_factor(grid)?;
    let g1 = central_gradient(&theta.first_field())?;
    let g2 = central_gradient(&theta.second_field())?;
    let inv_pen = 1.0 / (2.0 * (p.gamma - 1.0));
    let vals: Vec<f64> = (0..grid.n())
        .map(|i| {
            let w = eta.eval(p.eps * grid.node(i));
            let w2 = w * w;
            let (a, b) = (theta.first()[i], theta.second()[i]);
            let (da, db) = (g1.values()[i], g2.values()[i]);
            let excess = a * a + b * b - 1.0;
            w2 * (da * da + db * db) + w2 * w2 * (inv_pen * excess * excess + a * a * b * b)
        })
        .collect();
    Ok(0.5 * fac * integrate(grid, vals))
}
