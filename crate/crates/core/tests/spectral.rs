//! Second-variation operators against a dense oracle: the coupled
//! two-component Hessian at the symmetric state block-diagonalizes under
//! the component rotation, its wall-sector mode falls with the coupling,
//! and a hand-built direction certifies instability past the threshold.

mod common;

use common::jacobi_eigenvalues;
use dwall_core::{
    assemble, low_eigenvalues, solve_eta, BoundaryCondition, Grid, GroundState, OperatorKind,
    OperatorSpec, PhysParams, TriDiag,
};

fn ground(eps: f64, n: usize) -> GroundState {
    let p = PhysParams::new(eps, 0.0).expect("parameters");
    let g = Grid::new(0.0, 3.0, n).expect("grid");
    solve_eta(&p, g, 1e-9, 400_000).expect("ground state")
}

fn operator(kind: OperatorKind, eps: f64, gamma: f64, eta: &GroundState) -> TriDiag {
    let spec = OperatorSpec {
        kind,
        eps,
        gamma,
        bc_left: BoundaryCondition::Dirichlet,
        domain: eta.eta().grid(),
    };
    assemble(&spec, eta).expect("operator")
}

/// The two-component Hessian at the symmetric state has identical diagonal
/// blocks D and a multiplication operator O coupling the components; the
/// rotation (v1 +/- v2)/sqrt(2) splits it into the assembled in-phase and
/// anti-phase blocks, so D = (M_plus + M_gamma)/2 and O = their half
/// difference. The dense 2m-by-2m matrix built that way must carry exactly
/// the merged spectra of the two blocks.
#[test]
fn coupled_hessian_spectrum_matches_the_rotated_blocks() {
    let eps = 0.1;
    let gamma = 3.0;
    let eta = ground(eps, 129);
    let m_plus = operator(OperatorKind::LPlus, eps, gamma, &eta);
    let m_gamma = operator(OperatorKind::LGamma, eps, gamma, &eta);
    assert_eq!(
        m_plus.off(),
        m_gamma.off(),
        "blocks share the kinetic bands"
    );

    let m = m_plus.n();
    let mut dense = vec![vec![0.0; 2 * m]; 2 * m];
    for i in 0..m {
        let d = 0.5 * (m_plus.diag()[i] + m_gamma.diag()[i]);
        let o = 0.5 * (m_plus.diag()[i] - m_gamma.diag()[i]);
        dense[i][i] = d;
        dense[m + i][m + i] = d;
        dense[i][m + i] = o;
        dense[m + i][i] = o;
        if i + 1 < m {
            let band = m_plus.off()[i];
            dense[i][i + 1] = band;
            dense[i + 1][i] = band;
            dense[m + i][m + i + 1] = band;
            dense[m + i + 1][m + i] = band;
        }
    }
    let oracle = jacobi_eigenvalues(dense);

    let k = 6;
    let mut merged = Vec::new();
    merged.extend_from_slice(&low_eigenvalues(&m_plus, k).expect("spectrum").eigenvalues);
    merged.extend_from_slice(&low_eigenvalues(&m_gamma, k).expect("spectrum").eigenvalues);
    merged.sort_by(f64::total_cmp);
    merged.truncate(k);

    let scale = oracle.iter().fold(0.0_f64, |w, v| w.max(v.abs()));
    for (i, (got, want)) in merged.iter().zip(&oracle).enumerate() {
        assert!(
            (got - want).abs() <= 1e-8 * scale,
            "mode {i}: rotated blocks give {got}, dense oracle gives {want}"
        );
    }
}

#[test]
fn wall_sector_mode_decreases_with_coupling_and_crosses_zero() {
    let eta = ground(0.1, 2049);
    let mut lowest = Vec::new();
    for gamma in [1.0, 1.05, 1.1, 1.2] {
        let m = operator(OperatorKind::LGamma, 0.1, gamma, &eta);
        let r = low_eigenvalues(&m, 1).expect("spectrum");
        lowest.push((gamma, r.eigenvalues[0]));
    }
    for window in lowest.windows(2) {
        assert!(
            window[1].1 < window[0].1,
            "stronger coupling should lower the mode: {lowest:?}"
        );
    }
    assert!(
        lowest[1].1 > 0.0,
        "just above unit coupling the sector is stable"
    );
    assert!(
        lowest[2].1 < 0.0,
        "by gamma 1.1 the sector has turned unstable"
    );
}

/// An explicit direction with negative Rayleigh quotient is a solver-free
/// certificate that the wall sector is unstable at (0.05, 1.2): by the
/// variational principle the lowest eigenvalue sits below the quotient.
#[test]
fn a_hand_built_direction_certifies_instability_past_the_threshold() {
    let eta = ground(0.05, 2049);
    let g = eta.eta().grid();
    let m = operator(OperatorKind::LGamma, 0.05, 1.2, &eta);
    let v: Vec<f64> = (1..g.n() - 1)
        .map(|i| {
            let x = g.node(i);
            if x < 1.0 {
                x * (1.0 - x * x)
            } else {
                0.0
            }
        })
        .collect();
    let image = m.apply(&v).expect("apply");
    let quotient = v.iter().zip(&image).map(|(a, b)| a * b).sum::<f64>()
        / v.iter().map(|a| a * a).sum::<f64>();
    assert!(
        quotient < -0.05,
        "trial quotient {quotient} should be decisively negative"
    );

    let r = low_eigenvalues(&m, 1).expect("spectrum");
    assert!(
        r.eigenvalues[0] <= quotient + 1e-12,
        "the computed minimum {} must undercut the trial quotient {quotient}",
        r.eigenvalues[0]
    );
}
