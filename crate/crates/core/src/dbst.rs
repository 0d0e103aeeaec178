//! Disjoint bottleneck spanning trees: `k` node-disjoint trees, each taking
//! exactly one point of every `k`-tuple.
//!
//! The minimum spanning tree is cut into buckets of `k` nearby nodes, the
//! points are labeled so that every tuple and every bucket shows each label
//! once, and the label-`c` point of each bucket is joined to the label-`c`
//! point of its parent bucket. Every joined pair is at most `3k - 2` hops
//! apart in the spanning tree, so by the triangle inequality no edge exceeds
//! `(3k - 2)` times the spanning tree's bottleneck.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labeling::{konig_labeling, Labeling};
use crate::metric::{MetricInstance, PointId, TuplePartition};
use crate::tree::{longest_edge, minimum_spanning_tree, Forest, Tree, TreeIndex};

/// Ordered buckets of `k` nodes over a rooted tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BucketPartition {
    pub buckets: Vec<Vec<PointId>>,
    /// Node whose subtree the bucket was drawn from.
    pub representatives: Vec<PointId>,
    /// Bucket holding the representative, or the representative's parent
    /// when the representative went into this bucket. `None` only for the
    /// last bucket.
    pub parent_bucket: Vec<Option<usize>>,
}

/// Cuts a rooted tree into buckets of `k` nodes, bottom-up.
///
/// Each step picks the node `v` with the smallest subtree size `N(v) >= k`
/// (ties by id), so every child subtree of `v` has fewer than `k` nodes, and
/// then repeatedly removes the deepest remaining leaf below `v` (ties by id)
/// until the bucket is full. Any two nodes of a bucket are within `2k - 2`
/// hops.
pub fn bucketize(tree: &Tree, k: usize) -> Result<BucketPartition> {
    let root = tree
        .root()
        .ok_or_else(|| Error::Precondition("bucketize needs a rooted tree".into()))?;
    if k == 0 || !tree.len().is_multiple_of(k) {
        return Err(Error::Partition(format!(
            "{} nodes cannot be split into buckets of {k}",
            tree.len()
        )));
    }
    let index = TreeIndex::rooted(tree, root)?;
    let n = index.len();
    let mut size: Vec<usize> = (0..n).map(|x| index.subtree_size(x)).collect();
    let mut alive = vec![true; n];
    let mut alive_children: Vec<usize> = (0..n).map(|x| index.children(x).len()).collect();
    let mut candidates: BTreeSet<(usize, usize)> = (0..n).filter(|&x| size[x] >= k).map(|x| (size[x], x)).collect();

    let mut buckets = Vec::with_capacity(n / k);
    let mut reps = Vec::with_capacity(n / k);
    let mut bucket_of = vec![usize::MAX; n];

    while let Some(&(_, v)) = candidates.first() {
        let mut leaves = BinaryHeap::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if alive_children[x] == 0 {
                leaves.push((index.depth(x), Reverse(x)));
            }
            stack.extend(index.children(x).iter().copied().filter(|&c| alive[c]));
        }
        let mut bucket = Vec::with_capacity(k);
        while bucket.len() < k {
            let (_, Reverse(x)) = leaves
                .pop()
                .ok_or_else(|| Error::Invariant(format!("subtree of {} ran out of leaves", index.id(v))))?;
            alive[x] = false;
            bucket_of[x] = buckets.len();
            bucket.push(x);
            if let Some(p) = index.parent(x) {
                alive_children[p] -= 1;
                if x != v && alive_children[p] == 0 {
                    leaves.push((index.depth(p), Reverse(p)));
                }
            }
        }
        let mut a = Some(v);
        while let Some(x) = a {
            candidates.remove(&(size[x], x));
            size[x] -= k;
            if alive[x] && size[x] >= k {
                candidates.insert((size[x], x));
            }
            a = index.parent(x);
        }
        buckets.push(bucket);
        reps.push(v);
    }
    if buckets.len() * k != n {
        return Err(Error::Invariant("bucketing left nodes behind".into()));
    }

    let parent_bucket = reps
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            if bucket_of[v] != j {
                Some(bucket_of[v])
            } else {
                index.parent(v).map(|p| bucket_of[p])
            }
        })
        .collect();
    Ok(BucketPartition {
        buckets: buckets
            .into_iter()
            .map(|b| b.into_iter().map(|x| index.id(x)).collect())
            .collect(),
        representatives: reps.into_iter().map(|x| index.id(x)).collect(),
        parent_bucket,
    })
}

/// Output of the tuple-respecting forest construction on a fixed tree.
#[derive(Clone, Debug)]
pub struct TreeForest {
    pub forest: Forest,
    pub labeling: Labeling,
    pub buckets: BucketPartition,
}

/// Builds `k` disjoint trees over the nodes of a rooted tree, each holding
/// one point of every tuple.
///
/// Tree `c` consists of the label-`c` points; each bucket's label-`c` point
/// is joined to the label-`c` point of its parent bucket and the last
/// bucket's points are the roots.
pub fn forest_on_tree(tree: &Tree, tuples: &TuplePartition) -> Result<TreeForest> {
    let k = tuples.k();
    let buckets = bucketize(tree, k)?;
    let labeling = konig_labeling(tuples.tuples(), &buckets.buckets, k)?;
    let by_label: Vec<Vec<PointId>> = buckets
        .buckets
        .iter()
        .map(|b| {
            let mut row = vec![usize::MAX; k];
            for &p in b {
                row[labeling.label(p).expect("every bucket point is labeled")] = p;
            }
            row
        })
        .collect();
    let last = buckets.buckets.len() - 1;
    let mut trees = Vec::with_capacity(k);
    for c in 0..k {
        let nodes: Vec<PointId> = by_label.iter().map(|row| row[c]).collect();
        let edges = buckets
            .parent_bucket
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.map(|p| (by_label[j][c], by_label[p][c])))
            .collect();
        let tree = Tree::new(nodes, edges, Some(by_label[last][c]))
            .map_err(|e| Error::Invariant(format!("label {c} does not form a tree: {e}")))?;
        trees.push(tree);
    }
    Ok(TreeForest {
        forest: Forest::new(trees)?,
        labeling,
        buckets,
    })
}

#[derive(Clone, Debug)]
pub struct DbstSolution {
    pub forest: Forest,
    pub bottleneck: f64,
    pub mst_bottleneck: f64,
    /// Set when the longest spanning-tree edge already separated every pair,
    /// in which case the two sides are returned unchanged.
    pub shortcut: bool,
    /// Present when the bucket construction ran.
    pub construction: Option<TreeForest>,
}

impl DbstSolution {
    /// Index of the tree containing each point.
    pub fn tree_of_points(&self, point_count: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; point_count];
        for (i, t) in self.forest.trees.iter().enumerate() {
            for &p in t.nodes() {
                of[p] = i;
            }
        }
        of
    }
}

/// `(3k - 2)`-approximation for `k` disjoint bottleneck spanning trees.
///
/// For `k = 2`, if deleting the longest spanning-tree edge leaves one point
/// of every pair on each side, the two sides are optimal and returned as is.
pub fn solve_dbst(instance: &MetricInstance, tuples: &TuplePartition) -> Result<DbstSolution> {
    let k = tuples.k();
    if instance.point_count() != k * tuples.len() {
        return Err(Error::Partition(format!(
            "{} points cannot form {} tuples of {k}",
            instance.point_count(),
            tuples.len()
        )));
    }
    let all: Vec<PointId> = instance.points().collect();
    let mst = minimum_spanning_tree(instance, &all)?;
    let mst_bottleneck = mst.bottleneck(instance);

    if k == 2 {
        let ((u, v), _) = longest_edge(&mst, instance)?;
        let (side_u, side_v) = mst.split_at(u, v)?;
        if tuples
            .tuples()
            .iter()
            .all(|t| side_u.contains(t[0]) != side_u.contains(t[1]))
        {
            let mut trees = vec![side_u, side_v];
            trees.sort_by_key(|t| t.nodes()[0]);
            let forest = Forest::new(trees)?;
            let bottleneck = forest.bottleneck(instance);
            return Ok(DbstSolution {
                forest,
                bottleneck,
                mst_bottleneck,
                shortcut: true,
                construction: None,
            });
        }
    }

    let root = mst.lowest_leaf();
    let rooted = mst.with_root(root)?;
    let built = forest_on_tree(&rooted, tuples)?;
    let forest = built.forest.clone();
    let bottleneck = forest.bottleneck(instance);
    Ok(DbstSolution {
        forest,
        bottleneck,
        mst_bottleneck,
        shortcut: false,
        construction: Some(built),
    })
}
