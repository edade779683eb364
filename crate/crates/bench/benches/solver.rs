use criterion::{criterion_group, criterion_main, Criterion};
use hedgehog_bench::{model, quick_options};
use hedgehog_core::{
    biaxial_delta, classify_shot, reduced_energy, solve_finite_ball, solve_semi_infinite, BiaxialPerturbation,
    Family, ShootingConfig, SolverOptions,
};

fn shots(c: &mut Criterion) {
    let m = model();
    let cfg = ShootingConfig::default();
    c.bench_function("classify_shot a2=0.2 r_max=20", |b| {
        b.iter(|| classify_shot(0.2, &m, 20.0, &cfg).unwrap())
    });
}

fn solves(c: &mut Criterion) {
    let m = model();
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    g.bench_function("finite ball R=0.3", |b| {
        b.iter(|| solve_finite_ball(&m, 0.3, &SolverOptions::default()).unwrap())
    });
    g.bench_function("semi-infinite r_max=50", |b| {
        b.iter(|| solve_semi_infinite(&m, 50.0, &quick_options()).unwrap())
    });
    g.finish();
}

fn checks(c: &mut Criterion) {
    let m = model();
    let p = solve_semi_infinite(&m, 50.0, &SolverOptions::default()).unwrap();
    let pert = BiaxialPerturbation::new(Family::Paper, 10.0).unwrap();
    c.bench_function("reduced_energy r_max=50", |b| b.iter(|| reduced_energy(&p, &m)));
    c.bench_function("biaxial_delta sigma=10", |b| b.iter(|| biaxial_delta(&pert, &p, &m).unwrap()));
}

criterion_group!(benches, shots, solves, checks);
criterion_main!(benches);
