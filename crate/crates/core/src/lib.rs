//! Approximation algorithms for bottleneck spanning tree problems over
//! finite metric spaces, their tour variants, and exact oracles for small
//! instances.
//!
//! * [`dbst`]: `k` disjoint trees, each taking one point of every tuple.
//! * [`gbst`]: one tree through a representative of every cluster of at
//!   most two points.
//! * [`pbst`]: `k` trees of equal size covering all points.
//! * [`tours`]: any of the above turned into tours.

// Matrix loops read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod dbst;
pub mod error;
pub mod gbst;
pub mod harness;
pub mod labeling;
pub mod metric;
pub mod oracle;
pub mod pbst;
pub mod tours;
pub mod tree;

pub use dbst::{solve_dbst, DbstSolution};
pub use error::{Error, Result};
pub use gbst::{solve_2gbst, GbstSolution};
pub use labeling::{konig_labeling, Labeling};
pub use metric::{ClusterPartition, Geometry, InstanceFile, MetricInstance, PointId, TuplePartition};
pub use pbst::{solve_pbst, PbstSolution};
pub use tours::{lift_to_tours, TourSet};
pub use tree::{Edge, Forest, Tree, TreeIndex};
