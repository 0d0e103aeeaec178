//! Partitioned bottleneck spanning trees: split `k * n` points into `k`
//! trees of exactly `n` points.
//!
//! The solver recurses on the minimum spanning tree while its longest edge
//! separates the points into multiples of `n`, and otherwise cuts the whole
//! spanning tree into `k` equal trees whose edges span at most 2 hops
//! (`k = 2, 3`) or 3 hops (`k >= 4`) of the spanning tree.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::metric::{MetricInstance, PointId};
use crate::tree::{cube_hamiltonian_path, longest_edge, minimum_spanning_tree, Edge, Forest, Tree, TreeIndex};

/// Hop bound guaranteed by [`balanced_partition`] for `k` parts.
pub fn hop_bound(k: usize) -> usize {
    if k <= 3 {
        2
    } else {
        3
    }
}

/// Splits `tree` into a tree `R` of `size_r` nodes and a tree `B` of the
/// remaining nodes, every edge spanning at most two hops of `tree`.
///
/// The tree is rooted at its lowest-id leaf.
pub fn partition_two(tree: &Tree, size_r: usize) -> Result<(Tree, Tree)> {
    split_two(tree, tree.lowest_leaf(), size_r)
}

/// Two-colour split rooted at the leaf `root`.
///
/// Nodes at even depth start red and odd depth blue; each colour class forms
/// a tree through grandparent links. The oversized class sheds its leaves,
/// deepest first and then by lowest id, to the other class, after which
/// every node links to whichever of its parent and grandparent shares its
/// colour. The red tree is rooted at `root`, the blue tree at `root`'s child.
fn split_two(tree: &Tree, root: PointId, red_size: usize) -> Result<(Tree, Tree)> {
    let n = tree.len();
    if red_size == 0 || red_size >= n {
        return Err(Error::Domain(format!(
            "cannot split {n} nodes into {red_size} and {}",
            n as isize - red_size as isize
        )));
    }
    let index = TreeIndex::rooted(tree, root)?;
    let r = index.root();
    if index.children(r).len() != 1 {
        return Err(Error::Precondition(format!("split root {root} is not a leaf")));
    }
    let b = index.children(r)[0];
    let mut red: Vec<bool> = (0..n).map(|x| index.depth(x) % 2 == 0).collect();
    let red_count = red.iter().filter(|&&c| c).count();

    let (shrink_red, excess) = if red_count > red_size {
        (true, red_count - red_size)
    } else {
        (false, red_size - red_count)
    };
    if excess > 0 {
        let grandparent = |x: usize| index.parent(x).and_then(|p| index.parent(p));
        let in_class = |x: usize| (index.depth(x) % 2 == 0) == shrink_red;
        let mut class_children = vec![0usize; n];
        for x in 0..n {
            if in_class(x) {
                if let Some(g) = grandparent(x) {
                    class_children[g] += 1;
                }
            }
        }
        let mut leaves: std::collections::BinaryHeap<(usize, std::cmp::Reverse<usize>)> = (0..n)
            .filter(|&x| in_class(x) && class_children[x] == 0)
            .map(|x| (index.depth(x), std::cmp::Reverse(x)))
            .collect();
        for _ in 0..excess {
            let (_, std::cmp::Reverse(x)) = leaves
                .pop()
                .ok_or_else(|| Error::Invariant("colour class ran out of leaves".into()))?;
            red[x] = !shrink_red;
            if let Some(g) = grandparent(x) {
                class_children[g] -= 1;
                if class_children[g] == 0 {
                    leaves.push((index.depth(g), std::cmp::Reverse(g)));
                }
            }
        }
    }

    let (mut red_nodes, mut blue_nodes) = (Vec::new(), Vec::new());
    let (mut red_edges, mut blue_edges) = (Vec::new(), Vec::new());
    for x in 0..n {
        let (nodes, edges) = if red[x] {
            (&mut red_nodes, &mut red_edges)
        } else {
            (&mut blue_nodes, &mut blue_edges)
        };
        nodes.push(index.id(x));
        if x == r || x == b {
            continue;
        }
        let p = index.parent(x).expect("non-root has a parent");
        let target = if red[p] == red[x] {
            p
        } else {
            match index.parent(p) {
                Some(g) if red[g] == red[x] => g,
                _ => {
                    return Err(Error::Invariant(format!(
                        "node {} has no same-coloured parent or grandparent",
                        index.id(x)
                    )))
                }
            }
        };
        edges.push((index.id(x), index.id(target)));
    }
    if !red[r] || red[b] {
        return Err(Error::Invariant("split roots changed colour".into()));
    }
    let red_tree = Tree::new(red_nodes, red_edges, Some(index.id(r)))
        .map_err(|e| Error::Invariant(format!("red class is not a tree: {e}")))?;
    let blue_tree = Tree::new(blue_nodes, blue_edges, Some(index.id(b)))
        .map_err(|e| Error::Invariant(format!("blue class is not a tree: {e}")))?;
    Ok((red_tree, blue_tree))
}

/// Mutable rooted tree over the local indices of a [`TreeIndex`]. Its edges
/// may differ from the original tree's once pieces are spliced back in.
struct WorkTree<'a> {
    index: &'a TreeIndex,
    parent: Vec<Option<usize>>,
    children: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    root: usize,
}

struct Carve {
    piece: Tree,
    /// Children of the carved node after the split child, in order.
    later_children: Vec<usize>,
    /// Nodes of the piece spliced back under the carved node, itself included.
    spliced: Vec<usize>,
}

impl<'a> WorkTree<'a> {
    fn new(index: &'a TreeIndex) -> Self {
        let n = index.len();
        Self {
            index,
            parent: (0..n).map(|x| index.parent(x)).collect(),
            children: (0..n).map(|x| index.children(x).iter().copied().collect()).collect(),
            alive: vec![true; n],
            root: index.root(),
        }
    }

    fn sizes(&self) -> Vec<usize> {
        let mut order = Vec::new();
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            order.push(x);
            stack.extend(self.children[x].iter().copied());
        }
        let mut size = vec![0; self.alive.len()];
        for &x in order.iter().rev() {
            size[x] += 1;
            if let Some(p) = self.parent[x] {
                size[p] += size[x];
            }
        }
        size
    }

    fn subtree(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            out.push(y);
            stack.extend(self.children[y].iter().copied());
        }
        out
    }

    fn alive_nodes(&self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&x| self.alive[x]).collect()
    }

    /// Working edges with both ends in `nodes`.
    fn edges_within(&self, nodes: &[usize]) -> Vec<Edge> {
        let mut mark = vec![false; self.alive.len()];
        for &x in nodes {
            mark[x] = true;
        }
        nodes
            .iter()
            .filter_map(|&x| match self.parent[x] {
                Some(p) if mark[p] => Some((self.index.id(x), self.index.id(p))),
                _ => None,
            })
            .collect()
    }

    fn ids(&self, nodes: &[usize]) -> Vec<PointId> {
        nodes.iter().map(|&x| self.index.id(x)).collect()
    }

    fn build(&self, nodes: &[usize], edges: Vec<Edge>, root: usize) -> Result<Tree> {
        Tree::new(self.ids(nodes), edges, Some(self.index.id(root)))
            .map_err(|e| Error::Invariant(format!("partition piece is not a tree: {e}")))
    }

    fn remove(&mut self, nodes: &[usize]) {
        for &x in nodes {
            self.alive[x] = false;
        }
        for &x in nodes {
            if let Some(p) = self.parent[x] {
                if self.alive[p] {
                    self.children[p].remove(&x);
                }
            }
        }
    }

    fn remaining(&self) -> Result<Tree> {
        let nodes = self.alive_nodes();
        let edges = self.edges_within(&nodes);
        self.build(&nodes, edges, self.root)
    }

    /// Tree made of `top`, the subtree of its child `child`, and the edge between them.
    fn hanging_tree(&self, top: usize, child: usize) -> Result<Tree> {
        let mut nodes = self.subtree(child);
        let mut edges = self.edges_within(&nodes);
        edges.push((self.index.id(top), self.index.id(child)));
        nodes.push(top);
        self.build(&nodes, edges, top)
    }

    /// Re-hangs the nodes of `tree` (rooted at `top`, which stays put) with
    /// the tree's own edges.
    fn splice(&mut self, tree: &Tree, top: usize) -> Vec<usize> {
        let locals: Vec<usize> = tree.nodes().iter().map(|&p| self.index.local(p).unwrap()).collect();
        for &y in &locals {
            if y != top {
                self.children[y].clear();
            }
        }
        let adj = tree.adjacency();
        let mut stack = vec![top];
        let mut seen = BTreeSet::from([top]);
        while let Some(y) = stack.pop() {
            for &z in &adj[&self.index.id(y)] {
                let z = self.index.local(z).unwrap();
                if seen.insert(z) {
                    self.parent[z] = Some(y);
                    self.children[y].insert(z);
                    stack.push(z);
                }
            }
        }
        locals
    }

    /// Carves `n` nodes out of the subtree of `w`, taking whole child
    /// subtrees (`lead` first, then by id) until the next one overflows,
    /// and splitting that one with [`split_two`] rooted at `w`. The
    /// leftover part of the split is re-hung under `w`.
    fn carve(&mut self, w: usize, lead: Option<usize>, n: usize) -> Result<Carve> {
        let size = self.sizes();
        let mut order: Vec<usize> = lead.into_iter().collect();
        order.extend(self.children[w].iter().copied().filter(|&c| Some(c) != lead));

        let mut taken = 0;
        let mut j = None;
        for (i, &u) in order.iter().enumerate() {
            if taken + size[u] >= n {
                j = Some(i);
                break;
            }
            taken += size[u];
        }
        let j = j.ok_or_else(|| Error::Invariant("children of the carved node are too small".into()))?;
        let uj = order[j];
        let need = n - taken;

        let hanging = self.hanging_tree(w, uj)?;
        let (rest, part) = split_two(&hanging, self.index.id(w), size[uj] + 1 - need)?;

        let mut nodes: Vec<usize> = Vec::with_capacity(n);
        let mut edges: Vec<Edge> = Vec::new();
        for &u in &order[..j] {
            let sub = self.subtree(u);
            edges.extend(self.edges_within(&sub));
            nodes.extend(sub);
        }
        edges.extend_from_slice(part.edges());
        nodes.extend(part.nodes().iter().map(|&p| self.index.local(p).unwrap()));
        for pair in order[..=j].windows(2) {
            edges.push((self.index.id(pair[0]), self.index.id(pair[1])));
        }
        let piece = self.build(&nodes, edges, order[0])?;

        self.remove(&nodes);
        let spliced = self.splice(&rest, w);
        Ok(Carve {
            piece,
            later_children: order[j + 1..].to_vec(),
            spliced,
        })
    }
}

/// Splits a tree of `3n` nodes into three trees of `n` nodes whose edges
/// span at most two hops of the input tree.
pub fn partition_three(tree: &Tree) -> Result<[Tree; 3]> {
    let total = tree.len();
    if !total.is_multiple_of(3) {
        return Err(Error::Partition(format!("{total} nodes cannot form three equal trees")));
    }
    let n = total / 3;
    let index = TreeIndex::rooted(tree, tree.lowest_leaf())?;
    let mut work = WorkTree::new(&index);

    let size = work.sizes();
    let v = (0..total)
        .filter(|&x| size[x] >= n)
        .min_by_key(|&x| (size[x], x))
        .expect("the root always qualifies");

    if size[v] == n {
        let nodes = work.subtree(v);
        let red = work.build(&nodes, work.edges_within(&nodes), v)?;
        work.remove(&nodes);
        let (green, blue) = partition_two(&work.remaining()?, n)?;
        return Ok([red, green, blue]);
    }

    let first = work.carve(v, None, n)?;
    let red = first.piece;
    let size = work.sizes();

    if size[v] == n {
        let nodes = work.subtree(v);
        let green = work.build(&nodes, work.edges_within(&nodes), v)?;
        work.remove(&nodes);
        return Ok([red, green, work.remaining()?]);
    }

    if size[v] < n {
        let mut below = v;
        let mut w = work.parent[v].ok_or_else(|| Error::Invariant("carved node is the root".into()))?;
        while size[w] < n {
            below = w;
            w = work.parent[w].ok_or_else(|| Error::Invariant("no ancestor holds n nodes".into()))?;
        }
        let green = if size[w] == n {
            let nodes = work.subtree(w);
            let t = work.build(&nodes, work.edges_within(&nodes), w)?;
            work.remove(&nodes);
            t
        } else {
            work.carve(w, Some(below), n)?.piece
        };
        return Ok([red, green, work.remaining()?]);
    }

    // The remainder below v still exceeds n: take the spliced piece under v
    // plus further children of v, splitting the child that overflows.
    let mut taken = first.spliced.len();
    let mut l = None;
    for (i, &u) in first.later_children.iter().enumerate() {
        if taken + size[u] >= n {
            l = Some(i);
            break;
        }
        taken += size[u];
    }
    let l = l.ok_or_else(|| Error::Invariant("children of v are too small".into()))?;
    let ul = first.later_children[l];
    let need = n - taken + 1;

    let mut green_nodes: Vec<usize> = first.spliced.clone();
    for &u in &first.later_children[..l] {
        green_nodes.extend(work.subtree(u));
    }
    let mut green_edges = work.edges_within(&green_nodes);
    let mut blue_part: Option<Tree> = None;
    if need == size[ul] + 1 {
        let sub = work.subtree(ul);
        green_edges.push((index.id(v), index.id(ul)));
        green_edges.extend(work.edges_within(&sub));
        green_nodes.extend(sub);
    } else {
        let hanging = work.hanging_tree(v, ul)?;
        let (part, rest) = split_two(&hanging, index.id(v), need)?;
        green_edges.extend_from_slice(part.edges());
        green_nodes.extend(
            part.nodes()
                .iter()
                .map(|&p| index.local(p).unwrap())
                .filter(|&x| x != v),
        );
        blue_part = Some(rest);
    }
    let green = work.build(&green_nodes, green_edges, v)?;

    let pv = work.parent[v].ok_or_else(|| Error::Invariant("v is the root".into()))?;
    let mut skip = vec![false; total];
    let mut blue_edges = Vec::new();
    let mut roots = Vec::new();
    if let Some(part) = &blue_part {
        for &p in part.nodes() {
            skip[index.local(p).unwrap()] = true;
        }
        blue_edges.extend_from_slice(part.edges());
        roots.push(ul);
    }
    roots.extend_from_slice(&first.later_children[l + 1..]);
    work.remove(&green_nodes);
    let blue_nodes = work.alive_nodes();
    let plain: Vec<usize> = blue_nodes.iter().copied().filter(|&x| !skip[x]).collect();
    blue_edges.extend(work.edges_within(&plain));
    for pair in roots.windows(2) {
        blue_edges.push((index.id(pair[0]), index.id(pair[1])));
    }
    if let Some(&last) = roots.last() {
        blue_edges.push((index.id(last), index.id(pv)));
    }
    let blue = work.build(&blue_nodes, blue_edges, work.root)?;
    Ok([red, green, blue])
}

/// Cuts a Hamiltonian path of the tree's cube into `k` consecutive pieces.
pub fn partition_many(tree: &Tree, k: usize) -> Result<Forest> {
    if k == 0 || !tree.len().is_multiple_of(k) {
        return Err(Error::Partition(format!(
            "{} nodes cannot form {k} equal trees",
            tree.len()
        )));
    }
    let n = tree.len() / k;
    let order = match tree.edges().first() {
        Some(&(u, v)) => cube_hamiltonian_path(tree, u, v)?,
        None => tree.nodes().to_vec(),
    };
    let trees = order
        .chunks(n)
        .map(|piece| {
            let edges = piece.windows(2).map(|w| (w[0], w[1])).collect();
            Tree::from_parts(piece.to_vec(), edges, Some(piece[0]))
        })
        .collect();
    Forest::new(trees)
}

/// Splits a tree into `k` trees of equal size with edges of at most
/// [`hop_bound`]`(k)` hops.
pub fn balanced_partition(tree: &Tree, k: usize) -> Result<Forest> {
    if k == 0 || !tree.len().is_multiple_of(k) {
        return Err(Error::Partition(format!(
            "{} nodes cannot form {k} equal trees",
            tree.len()
        )));
    }
    match k {
        1 => Forest::new(vec![tree.clone()]),
        2 => {
            let (r, b) = partition_two(tree, tree.len() / 2)?;
            Forest::new(vec![r, b])
        }
        3 => Forest::new(partition_three(tree)?.into()),
        _ => partition_many(tree, k),
    }
}

#[derive(Clone, Debug)]
pub struct PbstSolution {
    pub forest: Forest,
    pub bottleneck: f64,
    pub mst_bottleneck: f64,
    /// Bottleneck of every spanning subtree handed to [`balanced_partition`];
    /// each is a lower bound on the optimum.
    pub partitioned_bottlenecks: Vec<f64>,
}

/// Approximation for `k` trees of `n` points each: factor 2 for `k <= 3`
/// and 3 for `k >= 4`. Requires `n >= 3`.
pub fn solve_pbst(instance: &MetricInstance, k: usize) -> Result<PbstSolution> {
    let total = instance.point_count();
    if k == 0 || !total.is_multiple_of(k) {
        return Err(Error::Partition(format!("{total} points cannot form {k} equal trees")));
    }
    let n = total / k;
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "trees of {n} points are a bottleneck matching problem; use a matching solver"
        )));
    }
    let all: Vec<PointId> = instance.points().collect();
    let mst = minimum_spanning_tree(instance, &all)?;
    let mut trees = Vec::with_capacity(k);
    let mut lower = Vec::new();
    let mut pending = vec![(mst.clone(), k)];
    while let Some((tree, parts)) = pending.pop() {
        if parts == 1 {
            trees.push(tree);
            continue;
        }
        let ((u, v), _) = longest_edge(&tree, instance)?;
        let (a, b) = tree.split_at(u, v)?;
        if a.len() % n == 0 && b.len() % n == 0 {
            let (ka, kb) = (a.len() / n, b.len() / n);
            pending.push((b, kb));
            pending.push((a, ka));
        } else {
            lower.push(tree.bottleneck(instance));
            trees.extend(balanced_partition(&tree, parts)?.trees);
        }
    }
    trees.sort_by_key(|t| t.nodes()[0]);
    let forest = Forest::new(trees)?;
    Ok(PbstSolution {
        bottleneck: forest.bottleneck(instance),
        mst_bottleneck: mst.bottleneck(instance),
        forest,
        partitioned_bottlenecks: lower,
    })
}

/// Largest hop count, in `source`, over the edges of the given trees.
pub fn max_hops(source: &TreeIndex, trees: &[Tree]) -> Result<usize> {
    let mut worst = 0;
    for t in trees {
        for &(a, b) in t.edges() {
            worst = worst.max(source.hops(a, b)?);
        }
    }
    Ok(worst)
}

/// Node count of every tree, keyed by its lowest node.
pub fn sizes(forest: &Forest) -> BTreeMap<PointId, usize> {
    forest.trees.iter().map(|t| (t.nodes()[0], t.len())).collect()
}
