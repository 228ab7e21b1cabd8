//! Cross-checks tying the limit eigenproblem to the energies it is supposed
//! to control: the flux-form second variation changes sign exactly at the
//! critical width, the pitchfork coefficient is stable under grid doubling,
//! and below the threshold the broken-symmetry profile beats the constant.

use std::f64::consts::FRAC_PI_4;

use dwall_core::{
    energy_i, full_line_wall, mu_zero, normal_form_delta2, solve_limit_profile, solve_nu0, Grid,
    LimitCoordinate, LimitVariant, PairField, PhysParams,
};

/// Discrete second variation of the constrained energy at the constant
/// angle, in flux form on the unit interval: `mu S1 - S2 / mu` with
/// `S1 = int (1 - x^2) v'^2` (midpoint flux sum) and
/// `S2 = int (1 - x^2)^2 v^2` (trapezoid).
fn q_form(g: Grid, v: &[f64], mu: f64) -> f64 {
    let h = g.h();
    let mut s1 = 0.0;
    for i in 0..g.n() - 1 {
        let xm = g.node(i) + 0.5 * h;
        let d = v[i + 1] - v[i];
        s1 += (1.0 - xm * xm) * d * d / h;
    }
    let mut s2 = 0.0;
    for (i, x) in g.nodes().enumerate() {
        let w = if i == 0 || i == g.n() - 1 { 0.5 } else { 1.0 };
        let q = (1.0 - x * x) * (1.0 - x * x);
        s2 += w * q * v[i] * v[i] * h;
    }
    mu * s1 - s2 / mu
}

#[test]
fn the_second_variation_changes_sign_at_the_critical_width() {
    let g = Grid::new(0.0, 1.0, 2049).expect("grid");
    let le = solve_nu0(LimitCoordinate::XUnitInterval, g).expect("eigenpair");
    let mu0 = mu_zero(&le);
    let v0 = le.v0.values();

    // At the critical width the lowest direction is exactly neutral.
    let at_threshold = q_form(g, v0, mu0);
    assert!(
        at_threshold.abs() <= 1e-8,
        "neutral direction at the threshold, got {at_threshold:.3e}"
    );

    // Above the threshold the form is nonnegative in every direction; the
    // eigendirection and a generic smooth field both come out positive.
    for mu in [0.38, 0.45] {
        let q = q_form(g, v0, mu);
        assert!(
            q >= -1e-8,
            "form should be nonnegative at mu = {mu}, got {q:.3e}"
        );
        assert!(
            q > 0.01,
            "form should be strictly positive at mu = {mu}, got {q:.3e}"
        );
    }
    let smooth: Vec<f64> = g
        .nodes()
        .map(|x| (std::f64::consts::PI * x).sin() + 0.3 * (2.0 * std::f64::consts::PI * x).sin())
        .collect();
    let q_smooth = q_form(g, &smooth, mu0);
    assert!(
        q_smooth > 0.0,
        "generic direction at the threshold, got {q_smooth:.3e}"
    );

    // Well below the threshold the eigendirection is decisively unstable.
    let q_below = q_form(g, v0, 0.2);
    assert!(
        q_below < -1.0,
        "instability below the threshold, got {q_below:.3e}"
    );
}

#[test]
fn the_pitchfork_coefficient_is_stable_under_grid_doubling() {
    let coarse = solve_nu0(
        LimitCoordinate::XUnitInterval,
        Grid::new(0.0, 1.0, 1025).expect("grid"),
    )
    .expect("eigenpair");
    let fine = solve_nu0(
        LimitCoordinate::XUnitInterval,
        Grid::new(0.0, 1.0, 2049).expect("grid"),
    )
    .expect("eigenpair");
    let d_coarse = normal_form_delta2(&coarse).expect("coefficient");
    let d_fine = normal_form_delta2(&fine).expect("coefficient");
    assert!(
        d_fine < 0.0,
        "supercritical branch needs a negative coefficient, got {d_fine}"
    );
    let rel = (d_coarse - d_fine).abs() / d_fine.abs();
    assert!(
        rel <= 1e-3,
        "doubling the grid moved the coefficient by {rel:.3e} ({d_coarse} vs {d_fine})"
    );
}

#[test]
fn below_the_threshold_the_wall_beats_the_constant_angle() {
    let mu = 0.2;
    let g = Grid::new(0.0, 5.0, 2049).expect("grid");
    let (u, report) = solve_limit_profile(mu, g, 1e-9, 5_000_000).expect("profile");
    assert!(report.converged, "profile relaxation should converge");

    let wall = full_line_wall(&u).expect("extension");
    let p = PhysParams::with_mu(1.0, 1.0, mu).expect("parameters");
    let e_wall = energy_i(&wall, &p, None, LimitVariant::MuOne).expect("wall energy");

    let constant = PairField::from_fn(wall.grid(), |_| FRAC_PI_4.sin(), |_| FRAC_PI_4.cos());
    let e_const = energy_i(&constant, &p, None, LimitVariant::MuOne).expect("constant energy");

    assert!(
        e_const - e_wall > 0.1,
        "expected a clear preference for the wall, got {e_wall} vs {e_const}"
    );
}
