//! Sequential against rayon execution of the same corpus sweep: the first
//! eight eigenvalues of every density. Build with `--no-default-features`
//! to measure the sequential fallback alone.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use string_spectra::density::Density;
use string_spectra::exec;
use string_spectra::prufer::Solver;
use string_spectra::verify::corpus;

const N_MAX: usize = 8;

fn sweep(c: &mut Criterion) {
    let mut densities: Vec<Density> = corpus::named().into_iter().map(|(_, d)| d).collect();
    densities.extend(corpus::random_concave(11, corpus::DEFAULT_SEED));
    let solver = Solver::default();
    let solve = |d: &Density| solver.eigenvalues(d, N_MAX).expect("corpus density solves");

    let mut group = c.benchmark_group("corpus_eigenvalues");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("sequential", densities.len()), &densities, |b, ds| {
        b.iter(|| exec::map_sequential(black_box(ds), solve))
    });
    #[cfg(feature = "parallel")]
    group.bench_with_input(BenchmarkId::new("parallel", densities.len()), &densities, |b, ds| {
        b.iter(|| exec::map_parallel(black_box(ds), solve))
    });
    group.finish();
}

fn single_solve(c: &mut Criterion) {
    let bump = Density::quadratic(-4.0, 4.0, 1.0).expect("positive");
    let solver = Solver::default();
    c.bench_function("bump_eigenvalue_n5", |b| {
        b.iter(|| solver.eigenvalue(black_box(&bump), 5))
    });
}

criterion_group!(benches, sweep, single_solve);
criterion_main!(benches);
