//! Combinatorial trees over point identifiers.
//!
//! Besides the [`Tree`] and [`Forest`] value types this module provides the
//! minimum spanning tree of a metric point set, bottleneck queries, the hop
//! metric of a tree, and Hamiltonian paths and cycles in the cube of a tree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{cmp_edges, MetricInstance, PointId};

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (PointId, PointId);

pub fn normalize(u: PointId, v: PointId) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A tree over point identifiers.
///
/// Nodes and edges are kept sorted so that equal trees compare and serialize
/// identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTree")]
pub struct Tree {
    nodes: Vec<PointId>,
    edges: Vec<Edge>,
    root: Option<PointId>,
}

#[derive(Deserialize)]
struct RawTree {
    nodes: Vec<PointId>,
    edges: Vec<Edge>,
    #[serde(default)]
    root: Option<PointId>,
}

impl TryFrom<RawTree> for Tree {
    type Error = Error;

    fn try_from(raw: RawTree) -> Result<Self> {
        Tree::new(raw.nodes, raw.edges, raw.root)
    }
}

impl Tree {
    pub fn new(mut nodes: Vec<PointId>, edges: Vec<Edge>, root: Option<PointId>) -> Result<Self> {
        nodes.sort_unstable();
        if nodes.is_empty() {
            return Err(Error::InvalidTree("tree has no nodes".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree(format!("node {} listed twice", w[0])));
        }
        if edges.len() + 1 != nodes.len() {
            return Err(Error::InvalidTree(format!(
                "{} nodes need {} edges, got {}",
                nodes.len(),
                nodes.len() - 1,
                edges.len()
            )));
        }
        let local = |id: PointId| nodes.binary_search(&id).ok();
        let mut dsu = Dsu::new(nodes.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            let (Some(a), Some(b)) = (local(u), local(v)) else {
                return Err(Error::InvalidTree(format!("edge ({u}, {v}) leaves the node set")));
            };
            if !dsu.union(a, b) {
                return Err(Error::InvalidTree(format!("edge ({u}, {v}) closes a cycle")));
            }
            normalized.push(normalize(u, v));
        }
        if let Some(r) = root {
            if local(r).is_none() {
                return Err(Error::InvalidTree(format!("root {r} is not a node")));
            }
        }
        normalized.sort_unstable();
        Ok(Self {
            nodes,
            edges: normalized,
            root,
        })
    }

    pub fn singleton(id: PointId) -> Self {
        Self {
            nodes: vec![id],
            edges: Vec::new(),
            root: Some(id),
        }
    }

    /// Builds a tree from parts already known to form a tree.
    pub(crate) fn from_parts(mut nodes: Vec<PointId>, edges: Vec<Edge>, root: Option<PointId>) -> Self {
        nodes.sort_unstable();
        let mut edges: Vec<Edge> = edges.into_iter().map(|(u, v)| normalize(u, v)).collect();
        edges.sort_unstable();
        debug_assert_eq!(edges.len() + 1, nodes.len());
        Self { nodes, edges, root }
    }

    pub fn nodes(&self) -> &[PointId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> Option<PointId> {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.nodes.binary_search(&id).is_ok()
    }

    pub fn has_edge(&self, u: PointId, v: PointId) -> bool {
        self.edges.binary_search(&normalize(u, v)).is_ok()
    }

    pub fn with_root(mut self, root: PointId) -> Result<Self> {
        if !self.contains(root) {
            return Err(Error::NodeNotInTree(root));
        }
        self.root = Some(root);
        Ok(self)
    }

    /// Neighbour lists, each sorted by id.
    pub fn adjacency(&self) -> BTreeMap<PointId, Vec<PointId>> {
        let mut adj: BTreeMap<PointId, Vec<PointId>> = self.nodes.iter().map(|&n| (n, Vec::new())).collect();
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, id: PointId) -> usize {
        self.edges.iter().filter(|&&(u, v)| u == id || v == id).count()
    }

    /// Lowest-id node of degree at most one.
    pub fn lowest_leaf(&self) -> PointId {
        let mut degree: BTreeMap<PointId, usize> = self.nodes.iter().map(|&n| (n, 0)).collect();
        for &(u, v) in &self.edges {
            *degree.get_mut(&u).unwrap() += 1;
            *degree.get_mut(&v).unwrap() += 1;
        }
        degree
            .into_iter()
            .find(|&(_, d)| d <= 1)
            .map(|(n, _)| n)
            .expect("every finite tree has a leaf")
    }

    /// Subtree size `N(v)` of every node with respect to the tree's root.
    pub fn subtree_sizes(&self) -> Result<BTreeMap<PointId, usize>> {
        let root = self
            .root
            .ok_or_else(|| Error::Precondition("subtree sizes need a rooted tree".into()))?;
        let index = TreeIndex::rooted(self, root)?;
        Ok(self
            .nodes
            .iter()
            .map(|&n| (n, index.subtree_size(index.local(n).unwrap())))
            .collect())
    }

    /// The two components left after deleting edge `(u, v)`; the first holds `u`.
    pub fn split_at(&self, u: PointId, v: PointId) -> Result<(Tree, Tree)> {
        if !self.has_edge(u, v) {
            return Err(Error::Precondition(format!("({u}, {v}) is not an edge of the tree")));
        }
        let cut = normalize(u, v);
        let adj = self.adjacency();
        let mut side_u = vec![u];
        let mut stack = vec![u];
        let mut seen = std::collections::BTreeSet::from([u]);
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if normalize(x, y) != cut && seen.insert(y) {
                    side_u.push(y);
                    stack.push(y);
                }
            }
        }
        let (mut eu, mut ev) = (Vec::new(), Vec::new());
        for &e in &self.edges {
            if e == cut {
                continue;
            }
            if seen.contains(&e.0) {
                eu.push(e);
            } else {
                ev.push(e);
            }
        }
        let side_v: Vec<PointId> = self.nodes.iter().copied().filter(|n| !seen.contains(n)).collect();
        let root_of = |nodes: &[PointId]| self.root.filter(|r| nodes.binary_search(r).is_ok());
        side_u.sort_unstable();
        let ru = root_of(&side_u);
        let rv = root_of(&side_v);
        Ok((Tree::from_parts(side_u, eu, ru), Tree::from_parts(side_v, ev, rv)))
    }

    /// Largest edge length, or zero for a single node.
    pub fn bottleneck(&self, instance: &MetricInstance) -> f64 {
        self.edges.iter().map(|&(u, v)| instance.dist(u, v)).fold(0.0, f64::max)
    }
}

/// A set of node-disjoint trees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Forest {
    pub fn new(trees: Vec<Tree>) -> Result<Self> {
        let mut all: Vec<PointId> = trees.iter().flat_map(|t| t.nodes().iter().copied()).collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree(format!("node {} is shared by two trees", w[0])));
        }
        Ok(Self { trees })
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn bottleneck(&self, instance: &MetricInstance) -> f64 {
        self.trees.iter().map(|t| t.bottleneck(instance)).fold(0.0, f64::max)
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Rooted, index-based view of a [`Tree`] answering hop-distance queries in
/// `O(log n)`.
///
/// Local indices follow the sorted node order, so comparing local indices
/// compares point ids.
#[derive(Clone, Debug)]
pub struct TreeIndex {
    ids: Vec<PointId>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    size: Vec<usize>,
    preorder: Vec<usize>,
    up: Vec<Vec<usize>>,
    root: usize,
}

impl TreeIndex {
    /// Index rooted at the tree's root, or at its lowest id when unrooted.
    pub fn new(tree: &Tree) -> Self {
        let root = tree.root().unwrap_or(tree.nodes()[0]);
        Self::rooted(tree, root).expect("root belongs to the tree")
    }

    pub fn rooted(tree: &Tree, root: PointId) -> Result<Self> {
        let ids = tree.nodes().to_vec();
        let n = ids.len();
        let local = |id: PointId| ids.binary_search(&id).unwrap();
        let root = ids.binary_search(&root).map_err(|_| Error::NodeNotInTree(root))?;
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in tree.edges() {
            let (a, b) = (local(u), local(v));
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        let mut visited = vec![false; n];
        visited[root] = true;
        while let Some(x) = stack.pop() {
            preorder.push(x);
            for &y in &adj[x] {
                if !visited[y] {
                    visited[y] = true;
                    parent[y] = Some(x);
                    depth[y] = depth[x] + 1;
                    children[x].push(y);
                    stack.push(y);
                }
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut size = vec![1; n];
        for &x in preorder.iter().rev() {
            if let Some(p) = parent[x] {
                size[p] += size[x];
            }
        }
        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![(0..n).map(|x| parent[x].unwrap_or(x)).collect::<Vec<_>>()];
        for j in 1..levels {
            let prev = &up[j - 1];
            let next = (0..n).map(|x| prev[prev[x]]).collect();
            up.push(next);
        }
        Ok(Self {
            ids,
            parent,
            children,
            depth,
            size,
            preorder,
            up,
            root,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn local(&self, id: PointId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn id(&self, local: usize) -> PointId {
        self.ids[local]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, local: usize) -> Option<usize> {
        self.parent[local]
    }

    pub fn children(&self, local: usize) -> &[usize] {
        &self.children[local]
    }

    pub fn depth(&self, local: usize) -> usize {
        self.depth[local]
    }

    pub fn subtree_size(&self, local: usize) -> usize {
        self.size[local]
    }

    /// Nodes in depth-first preorder from the root.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    fn ancestor(&self, mut x: usize, mut steps: usize) -> usize {
        let mut j = 0;
        while steps > 0 {
            if steps & 1 == 1 {
                x = self.up[j][x];
            }
            steps >>= 1;
            j += 1;
        }
        x
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = if self.depth[a] >= self.depth[b] { (a, b) } else { (b, a) };
        a = self.ancestor(a, self.depth[a] - self.depth[b]);
        if a == b {
            return a;
        }
        for j in (0..self.up.len()).rev() {
            if self.up[j][a] != self.up[j][b] {
                a = self.up[j][a];
                b = self.up[j][b];
            }
        }
        self.up[0][a]
    }

    pub fn hops_local(&self, a: usize, b: usize) -> usize {
        let l = self.lca(a, b);
        self.depth[a] + self.depth[b] - 2 * self.depth[l]
    }

    pub fn hops(&self, u: PointId, v: PointId) -> Result<usize> {
        let a = self.local(u).ok_or(Error::NodeNotInTree(u))?;
        let b = self.local(v).ok_or(Error::NodeNotInTree(v))?;
        Ok(self.hops_local(a, b))
    }
}

/// Number of edges on the unique path between `u` and `v`.
pub fn hop_distance(tree: &Tree, u: PointId, v: PointId) -> Result<usize> {
    TreeIndex::new(tree).hops(u, v)
}

/// Minimum spanning tree of the complete metric graph on `subset`.
///
/// Edges are ordered by length and then by their normalized id pair, which
/// makes the tree unique; it is both weight-optimal and bottleneck-optimal.
pub fn minimum_spanning_tree(instance: &MetricInstance, subset: &[PointId]) -> Result<Tree> {
    if subset.is_empty() {
        return Err(Error::Domain("minimum spanning tree of an empty point set".into()));
    }
    let mut points = subset.to_vec();
    points.sort_unstable();
    points.dedup();
    for &p in &points {
        instance.check_point(p)?;
    }
    let m = points.len();
    let mut in_tree = vec![false; m];
    // Best connecting edge per outside point as (length, normalized pair).
    let mut best: Vec<Option<(f64, PointId, PointId)>> = vec![None; m];
    let mut edges = Vec::with_capacity(m - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..m {
        let p = points[current];
        let mut next: Option<usize> = None;
        for i in 0..m {
            if in_tree[i] {
                continue;
            }
            let q = points[i];
            let (a, b) = normalize(p, q);
            let candidate = (instance.dist(p, q), a, b);
            if best[i].is_none_or(|old| cmp_edges(candidate, old).is_lt()) {
                best[i] = Some(candidate);
            }
            let better = match next {
                None => true,
                Some(j) => cmp_edges(best[i].unwrap(), best[j].unwrap()).is_lt(),
            };
            if better {
                next = Some(i);
            }
        }
        let j = next.expect("an outside point remains");
        let (_, a, b) = best[j].unwrap();
        edges.push((a, b));
        in_tree[j] = true;
        current = j;
    }
    Ok(Tree::from_parts(points, edges, None))
}

/// A longest edge of the tree; ties go to the first edge in sorted order.
pub fn longest_edge(tree: &Tree, instance: &MetricInstance) -> Result<(Edge, f64)> {
    let mut best: Option<(Edge, f64)> = None;
    for &(u, v) in tree.edges() {
        let d = instance.distance(u, v)?;
        if best.is_none_or(|(_, b)| d > b) {
            best = Some(((u, v), d));
        }
    }
    best.ok_or_else(|| Error::Domain("a single-node tree has no edges".into()))
}

enum Step {
    Emit(usize),
    /// Path over the subtree starting at its root.
    Descend(usize),
    /// Path over the subtree ending at its root.
    Ascend(usize),
}

/// Ordering of all nodes from `u` to `v` in which consecutive nodes are at
/// most three hops apart; `(u, v)` must be an edge.
///
/// This is the inductive construction for Hamiltonicity of tree cubes: split
/// at `(u, v)`, recurse on both sides using the lowest-id incident edge, and
/// join the two halves across `w - u - v - x`. Unrolled, every subtree is
/// traversed either root-first with its children's subtrees (root-last) in
/// descending id order, or root-last with its children's subtrees
/// (root-first) in ascending id order.
pub fn cube_hamiltonian_path(tree: &Tree, u: PointId, v: PointId) -> Result<Vec<PointId>> {
    if !tree.contains(u) {
        return Err(Error::NodeNotInTree(u));
    }
    if !tree.contains(v) {
        return Err(Error::NodeNotInTree(v));
    }
    if u == v || !tree.has_edge(u, v) {
        return Err(Error::Precondition(format!("({u}, {v}) is not an edge of the tree")));
    }
    let index = TreeIndex::rooted(tree, u)?;
    let lu = index.root();
    let lv = index.local(v).unwrap();
    let mut order = Vec::with_capacity(index.len());
    let mut stack = vec![Step::Ascend(lv)];
    stack.extend(
        index
            .children(lu)
            .iter()
            .filter(|&&c| c != lv)
            .map(|&c| Step::Ascend(c)),
    );
    stack.push(Step::Emit(lu));
    while let Some(step) = stack.pop() {
        match step {
            Step::Emit(x) => order.push(index.id(x)),
            Step::Descend(x) => {
                stack.extend(index.children(x).iter().map(|&c| Step::Ascend(c)));
                stack.push(Step::Emit(x));
            }
            Step::Ascend(x) => {
                stack.push(Step::Emit(x));
                stack.extend(index.children(x).iter().rev().map(|&c| Step::Descend(c)));
            }
        }
    }
    Ok(order)
}

/// Hamiltonian cycle of the tree cube, built from the path along the
/// lowest edge and closed by that edge.
pub fn cube_hamiltonian_cycle(tree: &Tree) -> Result<Vec<PointId>> {
    if tree.len() < 3 {
        return Err(Error::Domain(format!(
            "a Hamiltonian cycle needs at least 3 nodes, the tree has {}",
            tree.len()
        )));
    }
    let (u, v) = tree.edges()[0];
    cube_hamiltonian_path(tree, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(ids: &[PointId]) -> Tree {
        let edges = ids.windows(2).map(|w| (w[0], w[1])).collect();
        Tree::new(ids.to_vec(), edges, None).unwrap()
    }

    fn star(center: PointId, leaves: &[PointId]) -> Tree {
        let mut nodes = vec![center];
        nodes.extend_from_slice(leaves);
        Tree::new(nodes, leaves.iter().map(|&l| (center, l)).collect(), None).unwrap()
    }

    fn line(xs: &[f64]) -> MetricInstance {
        MetricInstance::from_coordinates(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn max_gap(tree: &Tree, order: &[PointId], cyclic: bool) -> usize {
        let idx = TreeIndex::new(tree);
        let mut gaps: Vec<usize> = order.windows(2).map(|w| idx.hops(w[0], w[1]).unwrap()).collect();
        if cyclic {
            gaps.push(idx.hops(*order.last().unwrap(), order[0]).unwrap());
        }
        gaps.into_iter().max().unwrap_or(0)
    }

    #[test]
    fn rejects_cycles_and_bad_counts() {
        assert!(Tree::new(vec![0, 1, 2], vec![(0, 1), (1, 2), (2, 0)], None).is_err());
        assert!(Tree::new(vec![0, 1, 2, 3], vec![(0, 1), (1, 0), (2, 3)], None).is_err());
        assert!(Tree::new(vec![0, 1], vec![(0, 5)], None).is_err());
        assert!(Tree::new(vec![0, 1], vec![(0, 1)], Some(7)).is_err());
        assert!(Tree::new(vec![4], vec![], Some(4)).is_ok());
    }

    #[test]
    fn tree_json_roundtrip() {
        let t = path(&[3, 1, 2]).with_root(3).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"nodes":[1,2,3],"edges":[[1,2],[1,3]],"root":3}"#);
        let back: Tree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Tree>(r#"{"nodes":[1,2],"edges":[],"root":null}"#).is_err());
    }

    #[test]
    fn mst_two_points() {
        let inst = line(&[0.0, 3.0]);
        let t = minimum_spanning_tree(&inst, &[0, 1]).unwrap();
        assert_eq!(t.edges(), &[(0, 1)]);
        assert_eq!(t.bottleneck(&inst), 3.0);
    }

    #[test]
    fn mst_unit_line_is_the_path() {
        let inst = line(&[0.0, 1.0, 2.0, 3.0]);
        let t = minimum_spanning_tree(&inst, &[3, 1, 0, 2]).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(t.bottleneck(&inst), 1.0);
    }

    #[test]
    fn mst_empty_subset() {
        let inst = line(&[0.0]);
        assert!(matches!(minimum_spanning_tree(&inst, &[]), Err(Error::Domain(_))));
        assert!(matches!(
            minimum_spanning_tree(&inst, &[4]),
            Err(Error::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn longest_edge_unique_and_tied() {
        let inst = line(&[0.0, 1.0, 6.0]);
        assert_eq!(longest_edge(&path(&[0, 1, 2]), &inst).unwrap(), ((1, 2), 5.0));
        let m = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![1.0, 2.0, 0.0, 2.0],
            vec![1.0, 2.0, 2.0, 0.0],
        ];
        let inst = MetricInstance::from_matrix(m).unwrap();
        assert_eq!(longest_edge(&star(0, &[3, 2, 1]), &inst).unwrap(), ((0, 1), 1.0));
        assert!(longest_edge(&Tree::singleton(0), &inst).is_err());
    }

    #[test]
    fn hop_distances() {
        let t = path(&[10, 11, 12, 13]);
        assert_eq!(hop_distance(&t, 11, 11).unwrap(), 0);
        assert_eq!(hop_distance(&t, 10, 13).unwrap(), 3);
        assert!(matches!(hop_distance(&t, 10, 99), Err(Error::NodeNotInTree(99))));
    }

    #[test]
    fn subtree_sizes_need_root() {
        let t = path(&[0, 1, 2]);
        assert!(t.subtree_sizes().is_err());
        let sizes = t.with_root(0).unwrap().subtree_sizes().unwrap();
        assert_eq!(sizes[&0], 3);
        assert_eq!(sizes[&1], 2);
        assert_eq!(sizes[&2], 1);
    }

    #[test]
    fn cube_path_on_a_path() {
        // a-b-c-d as 0-1-2-3
        let t = path(&[0, 1, 2, 3]);
        assert_eq!(cube_hamiltonian_path(&t, 0, 1).unwrap(), vec![0, 2, 3, 1]);
    }

    #[test]
    fn cube_path_single_edge() {
        let t = path(&[5, 9]);
        assert_eq!(cube_hamiltonian_path(&t, 9, 5).unwrap(), vec![9, 5]);
    }

    #[test]
    fn cube_path_star() {
        let t = star(0, &[1, 2, 3]);
        let order = cube_hamiltonian_path(&t, 0, 1).unwrap();
        assert_eq!(order[0], 0);
        assert_eq!(*order.last().unwrap(), 1);
        assert!(max_gap(&t, &order, false) <= 3);
    }

    #[test]
    fn cube_path_requires_edge() {
        let t = path(&[0, 1, 2]);
        assert!(matches!(cube_hamiltonian_path(&t, 0, 2), Err(Error::Precondition(_))));
        assert!(matches!(cube_hamiltonian_path(&t, 0, 7), Err(Error::NodeNotInTree(7))));
    }

    #[test]
    fn cube_cycle_small() {
        assert_eq!(cube_hamiltonian_cycle(&path(&[0, 1, 2])).unwrap(), vec![0, 2, 1]);
        let s = star(0, &[1, 2, 3]);
        let c = cube_hamiltonian_cycle(&s).unwrap();
        assert_eq!(c.len(), 4);
        assert!(max_gap(&s, &c, true) <= 2);
        assert!(cube_hamiltonian_cycle(&path(&[0, 1])).is_err());
    }
}
