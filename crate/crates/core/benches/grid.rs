//! Parallel pool against a single worker on the two grid-shaped workloads.
//! Build with `--no-default-features` for the purely sequential code path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gradop::diffop::{operator_grid, OpSpaceOptions};
use gradop::field::Rationals;
use gradop::hypervanish::Engine;
use gradop::par::with_threads;
use gradop::polyring::RingSpec;

fn quadric_ops(c: &mut Criterion) {
    let spec = RingSpec::new(Rationals, &["x", "y", "z", "w"], &["x*y - z*w"]).unwrap();
    let mut g = c.benchmark_group("operator_grid");
    g.sample_size(10);
    g.bench_function("pool", |b| b.iter(|| operator_grid(black_box(&spec), 2, -2, 0, OpSpaceOptions::default())));
    g.bench_function("one_thread", |b| {
        b.iter(|| with_threads(1, || operator_grid(black_box(&spec), 2, -2, 0, OpSpaceOptions::default())))
    });
    g.finish();
}

fn cubic_chase(c: &mut Criterion) {
    let mut g = c.benchmark_group("sym_tangent_range");
    g.sample_size(10);
    // fresh engine each time so the tables are recomputed
    g.bench_function("pool", |b| b.iter(|| Engine::new().sym_tangent_range(3, black_box(6)).unwrap()));
    g.bench_function("one_thread", |b| {
        b.iter(|| with_threads(1, || Engine::new().sym_tangent_range(3, black_box(6)).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, quadric_ops, cubic_chase);
criterion_main!(benches);
