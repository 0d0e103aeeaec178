//! Bottleneck tours obtained from trees through Hamiltonian cycles of their
//! cubes: every tour edge spans at most three hops of its tree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricInstance, PointId};
use crate::tree::{cube_hamiltonian_cycle, Forest, Tree, TreeIndex};

/// Node-disjoint cyclic tours, one per tree of the source forest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TourSet {
    pub tours: Vec<Vec<PointId>>,
}

impl TourSet {
    pub fn len(&self) -> usize {
        self.tours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tours.is_empty()
    }

    /// Longest edge over all tours, closing edges included.
    pub fn bottleneck(&self, instance: &MetricInstance) -> f64 {
        self.tours
            .iter()
            .map(|t| tour_bottleneck(instance, t))
            .fold(0.0, f64::max)
    }
}

/// Longest edge of the closed tour; 0 for fewer than two points.
pub fn tour_bottleneck(instance: &MetricInstance, tour: &[PointId]) -> f64 {
    if tour.len() < 2 {
        return 0.0;
    }
    let closing = instance.dist(tour[tour.len() - 1], tour[0]);
    tour.windows(2)
        .map(|w| instance.dist(w[0], w[1]))
        .fold(closing, f64::max)
}

/// Hop distance in `tree` between cyclically consecutive tour points.
pub fn cyclic_hop_gaps(tree: &Tree, tour: &[PointId]) -> Result<Vec<usize>> {
    let index = TreeIndex::new(tree);
    let m = tour.len();
    (0..m).map(|i| index.hops(tour[i], tour[(i + 1) % m])).collect()
}

/// Turns each tree into a tour along a Hamiltonian cycle of its cube.
/// Returns the tours and their bottleneck.
pub fn lift_to_tours(forest: &Forest, instance: &MetricInstance) -> Result<(TourSet, f64)> {
    let mut tours = Vec::with_capacity(forest.len());
    for tree in &forest.trees {
        if tree.len() < 3 {
            return Err(Error::DegenerateTour(format!(
                "tree on {:?} has {} nodes; a tour needs at least 3",
                tree.nodes(),
                tree.len()
            )));
        }
        for &p in tree.nodes() {
            instance.check_point(p)?;
        }
        tours.push(cube_hamiltonian_cycle(tree)?);
    }
    let set = TourSet { tours };
    let bottleneck = set.bottleneck(instance);
    Ok((set, bottleneck))
}
