use std::hint::black_box;

use bottleneck_bench::{plane, with_clusters, with_tuples};
use bottleneck_core::harness::{random_tree, seeded_rng};
use bottleneck_core::pbst::balanced_partition;
use bottleneck_core::tree::minimum_spanning_tree;
use bottleneck_core::{lift_to_tours, solve_2gbst, solve_dbst, solve_pbst, PointId};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn mst(c: &mut Criterion) {
    let mut group = c.benchmark_group("mst");
    for n in [200, 1000] {
        let inst = plane(n, 1);
        let all: Vec<PointId> = (0..n).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| minimum_spanning_tree(black_box(&inst), &all).unwrap())
        });
    }
    group.finish();
}

fn dbst(c: &mut Criterion) {
    let mut group = c.benchmark_group("dbst");
    for (n, k) in [(600, 2), (600, 3), (600, 6)] {
        let (inst, tuples) = with_tuples(n, k, 2);
        group.bench_with_input(BenchmarkId::new(format!("k{k}"), n), &n, |b, _| {
            b.iter(|| solve_dbst(black_box(&inst), &tuples).unwrap())
        });
    }
    group.finish();
}

fn gbst(c: &mut Criterion) {
    let mut group = c.benchmark_group("gbst");
    for n in [200, 600] {
        let (inst, clusters) = with_clusters(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_2gbst(black_box(&inst), &clusters).unwrap())
        });
    }
    group.finish();
}

fn pbst(c: &mut Criterion) {
    let mut group = c.benchmark_group("pbst");
    for k in [2, 3, 5] {
        let inst = plane(600, 4);
        group.bench_with_input(BenchmarkId::new("solve", k), &k, |b, &k| {
            b.iter(|| solve_pbst(black_box(&inst), k).unwrap())
        });
    }
    for k in [2, 3, 8] {
        let tree = random_tree(10_000 / k * k, &mut seeded_rng(5));
        group.bench_with_input(BenchmarkId::new("partition_10k", k), &k, |b, &k| {
            b.iter(|| balanced_partition(black_box(&tree), k).unwrap())
        });
    }
    group.finish();
}

fn tours(c: &mut Criterion) {
    let inst = plane(900, 6);
    let forest = solve_pbst(&inst, 3).unwrap().forest;
    c.bench_function("lift_to_tours/900", |b| {
        b.iter(|| lift_to_tours(black_box(&forest), &inst).unwrap())
    });
}

criterion_group!(benches, mst, dbst, gbst, pbst, tours);
criterion_main!(benches);
