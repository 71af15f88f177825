use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use sublorentz::exponential::{exp_inverse, exp_map, ExpCoords};
use sublorentz::oracle::{brute_force_distance, OracleConfig};
use sublorentz::spheres::{f_profile, sphere_mesh};
use sublorentz::{distance, maximizer};
use sublorentz_bench::interior_points;

fn exponential(c: &mut Criterion) {
    let points = interior_points(256);
    c.bench_function("exp_map", |b| {
        b.iter(|| {
            for i in 0..256 {
                let s = i as f64 / 256.0;
                black_box(exp_map(ExpCoords { psi: s - 0.5, c: 3.0 * s - 1.5, t: 1.0 + s }).unwrap());
            }
        })
    });
    c.bench_function("exp_inverse", |b| b.iter(|| points.iter().map(|&q| exp_inverse(black_box(q)).unwrap().t).sum::<f64>()));
    c.bench_function("distance", |b| b.iter(|| points.iter().map(|&q| distance(black_box(q)).unwrap().value).sum::<f64>()));
}

fn synthesis(c: &mut Criterion) {
    let points = interior_points(64);
    c.bench_function("maximizer_33", |b| {
        b.iter(|| points.iter().map(|&q| maximizer(black_box(q), 33).unwrap().length).sum::<f64>())
    });
}

fn spheres(c: &mut Criterion) {
    c.bench_function("f_profile", |b| b.iter(|| (-500..=500).map(|i| f_profile(black_box(i as f64 * 0.01))).sum::<f64>()));
    c.bench_function("sphere_mesh_101", |b| b.iter(|| sphere_mesh(black_box(1.0), (-2.0, 2.0), (-2.0, 2.0), 101, 101).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let q = interior_points(5)[2];
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("brute_force_32", |b| {
        b.iter_batched(OracleConfig::default, |cfg| brute_force_distance(black_box(q), &cfg).unwrap(), BatchSize::SmallInput)
    });
    group.finish();
}

criterion_group!(benches, exponential, synthesis, spheres, oracle);
criterion_main!(benches);
