use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dbbm_core::runner::{preset, run_batch, run_batch_sequential, SimulationConfig};
use dbbm_core::{DampingSymbol, Grid};

fn short_batch() -> Vec<SimulationConfig> {
    preset("fig2")
        .unwrap()
        .into_iter()
        .map(|mut c| {
            c.t_final = 1.0;
            c.snapshot_times.clear();
            c
        })
        .collect()
}

fn batch(c: &mut Criterion) {
    let cfgs = short_batch();
    let mut group = c.benchmark_group("fig2_batch_t1");
    group.sample_size(10);
    group.bench_function("rayon", |b| b.iter(|| run_batch(black_box(&cfgs))));
    group.bench_function("sequential", |b| {
        b.iter(|| run_batch_sequential(black_box(&cfgs)))
    });
    group.finish();
}

fn subadditivity(c: &mut Criterion) {
    let grid = Grid::new(100.0, -50.0, 1024).unwrap();
    let gamma = DampingSymbol::power(&grid, 2).unwrap();
    c.bench_function("subadditivity_search_m1024", |b| {
        b.iter(|| black_box(&gamma).subadditivity_constant())
    });
}

criterion_group!(benches, batch, subadditivity);
criterion_main!(benches);
