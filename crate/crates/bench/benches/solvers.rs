//! Benchmarks for the hot numerical paths: the scalar and coupled
//! relaxations, the low-spectrum solver, the tridiagonal backsolve, and the
//! energy evaluation.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use dwall_core::{
    assemble, energy_g, low_eigenvalues, solve_coupled, solve_eta, symmetric_state, thomas_solve,
    BoundaryCondition, Grid, OperatorKind, OperatorSpec, PhysParams, TriDiag,
};

fn ground_state_relaxation(c: &mut Criterion) {
    let p = PhysParams::new(0.1, 0.0).expect("parameters");
    let g = Grid::new(0.0, 3.0, 513).expect("grid");
    c.bench_function("solve_eta eps=0.1 n=513", |b| {
        b.iter(|| solve_eta(&p, g, 1e-9, 200_000).expect("ground state"));
    });
}

fn coupled_relaxation(c: &mut Criterion) {
    let p = PhysParams::new(0.1, 3.0).expect("parameters");
    let g = Grid::new(0.0, 3.0, 513).expect("grid");
    c.bench_function("solve_coupled gamma=3 n=513", |b| {
        b.iter(|| solve_coupled(&p, g, 0.5, None, 1e-9, 200_000).expect("profile"));
    });
}

fn low_spectrum(c: &mut Criterion) {
    let p = PhysParams::new(0.1, 0.0).expect("parameters");
    let g = Grid::new(0.0, 3.0, 1025).expect("grid");
    let eta = solve_eta(&p, g, 1e-9, 200_000).expect("ground state");
    let spec = OperatorSpec {
        kind: OperatorKind::LPlus,
        eps: 0.1,
        gamma: 0.0,
        bc_left: BoundaryCondition::Dirichlet,
        domain: g,
    };
    let m = assemble(&spec, &eta).expect("operator");
    c.bench_function("low_eigenvalues k=3 n=1023", |b| {
        b.iter(|| low_eigenvalues(&m, 3).expect("spectrum"));
    });
}

fn tridiagonal_solve(c: &mut Criterion) {
    let n = 4097;
    let diag = vec![4.0; n];
    let off = vec![-1.0; n - 1];
    let m = TriDiag::new(diag, off).expect("matrix");
    let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.01).sin()).collect();
    c.bench_function("thomas_solve n=4097", |b| {
        b.iter_batched(
            || rhs.clone(),
            |r| thomas_solve(&m, &r).expect("solution"),
            BatchSize::SmallInput,
        );
    });
}

fn energy_evaluation(c: &mut Criterion) {
    let p = PhysParams::new(0.1, 3.0).expect("parameters");
    let g = Grid::new(0.0, 3.0, 2049).expect("grid");
    let eta = solve_eta(&p, g, 1e-9, 200_000).expect("ground state");
    let pair = symmetric_state(&eta, 3.0).expect("state");
    c.bench_function("energy_g n=2049", |b| {
        b.iter(|| energy_g(&pair, &p).expect("energy"));
    });
}

criterion_group!(
    benches,
    ground_state_relaxation,
    coupled_relaxation,
    low_spectrum,
    tridiagonal_solve,
    energy_evaluation
);
criterion_main!(benches);
