//! Instances shared by the benchmarks.

use bottleneck_core::harness::{random_clusters, random_tuples, seeded_rng, Generator};
use bottleneck_core::{ClusterPartition, MetricInstance, TuplePartition};

/// Uniform points in the unit square.
pub fn plane(points: usize, seed: u64) -> MetricInstance {
    Generator::Euclidean {
        dim: 2,
        n_points: points,
    }
    .generate(&mut seeded_rng(seed))
    .expect("valid generator parameters")
}

pub fn with_tuples(points: usize, k: usize, seed: u64) -> (MetricInstance, TuplePartition) {
    let instance = plane(points, seed);
    let tuples = random_tuples(points, k, &mut seeded_rng(seed ^ 0x5eed)).expect("k divides points");
    (instance, tuples)
}

pub fn with_clusters(points: usize, seed: u64) -> (MetricInstance, ClusterPartition) {
    let instance = plane(points, seed);
    let clusters = random_clusters(points, 0.2, &mut seeded_rng(seed ^ 0x5eed)).expect("valid clustering");
    (instance, clusters)
}
