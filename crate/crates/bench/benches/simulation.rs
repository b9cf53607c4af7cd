use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use faplab_bench::{short_run, unit_geometry};
use faplab_core::sim::{sample_exact_zero_drift, simulate_first_arrival};
use faplab_core::Dimension;

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulation");
    g.sample_size(10);
    let cfg2 = short_run(Dimension::Two, 1e-3, 2_000);
    g.bench_function("euler_maruyama_2d_2k", |b| {
        b.iter(|| simulate_first_arrival(black_box(&cfg2), &[0.0]).unwrap())
    });
    let cfg3 = short_run(Dimension::Three, 1e-3, 2_000);
    g.bench_function("euler_maruyama_3d_2k", |b| {
        b.iter(|| simulate_first_arrival(black_box(&cfg3), &[0.0, 0.0]).unwrap())
    });
    let geo = unit_geometry(Dimension::Three);
    g.bench_function("exact_3d_100k", |b| {
        b.iter(|| sample_exact_zero_drift(&geo, &[0.0, 0.0], black_box(100_000), 5).unwrap())
    });
    g.finish();
}

criterion_group!(benches, simulation);
criterion_main!(benches);
