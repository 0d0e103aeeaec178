//! Generalized bottleneck spanning tree for clusters of at most two points.
//!
//! A threshold tree `T1` reaching every cluster is grown first; its
//! bottleneck never exceeds the optimum. One node per cluster is then chosen
//! by a walk over `T1`, and every chosen node is linked to a chosen node at
//! most three hops higher up, giving a tree within three times the optimum.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{cmp_edges, ClusterPartition, MetricInstance, PointId};
use crate::tree::{normalize, Dsu, Tree, TreeIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeStatus {
    Selected,
    Burned,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSelection {
    pub status: BTreeMap<PointId, NodeStatus>,
    /// Nodes in the order the walk visited them; pre-selected singletons come first.
    pub visit_order: Vec<PointId>,
}

impl NodeSelection {
    pub fn selected(&self) -> Vec<PointId> {
        self.status
            .iter()
            .filter(|(_, &s)| s == NodeStatus::Selected)
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn is_selected(&self, p: PointId) -> bool {
        self.status.get(&p) == Some(&NodeStatus::Selected)
    }
}

/// Adds edges in non-decreasing length until one component meets every
/// cluster, and returns the spanning forest edges of that component.
pub fn build_t1(instance: &MetricInstance, clusters: &ClusterPartition) -> Result<Tree> {
    let n = instance.point_count();
    let m = clusters.len();
    let cluster_of = clusters.cluster_of(n);
    if m <= 1 {
        let lowest = clusters
            .clusters()
            .first()
            .and_then(|c| c.iter().min())
            .copied()
            .unwrap_or(0);
        return Ok(Tree::singleton(lowest));
    }
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((instance.dist(u, v), u, v));
        }
    }
    pairs.sort_unstable_by(|a, b| cmp_edges(*a, *b));

    let mut dsu = Dsu::new(n);
    let mut covered: Vec<BTreeSet<usize>> = (0..n).map(|p| BTreeSet::from([cluster_of[p]])).collect();
    let mut forest_edges = Vec::new();
    for (_, u, v) in pairs {
        let (ru, rv) = (dsu.find(u), dsu.find(v));
        if ru == rv {
            continue;
        }
        dsu.union(ru, rv);
        forest_edges.push((u, v));
        let root = dsu.find(u);
        let other = if root == ru { rv } else { ru };
        let mut absorbed = std::mem::take(&mut covered[other]);
        let mut kept = std::mem::take(&mut covered[root]);
        if kept.len() < absorbed.len() {
            std::mem::swap(&mut kept, &mut absorbed);
        }
        kept.extend(absorbed);
        let done = kept.len() == m;
        covered[root] = kept;
        if done {
            let nodes: Vec<PointId> = (0..n).filter(|&p| dsu.find(p) == root).collect();
            let edges = forest_edges.into_iter().filter(|&(a, _)| dsu.find(a) == root).collect();
            return Ok(Tree::from_parts(nodes, edges, None));
        }
    }
    Err(Error::Invariant("no component reached every cluster".into()))
}

/// Chooses one node of every cluster by walking `t1` from its root.
///
/// Clusters with a single node in `t1` are selected up front. The walk then
/// repeats: select the current open node and burn its twin; continue at the
/// twin's parent if open, else at an open child of the twin (lowest id),
/// else at the root if still open, else at the lowest-id open node.
pub fn select_nodes(t1: &Tree, clusters: &ClusterPartition) -> Result<NodeSelection> {
    let root = t1
        .root()
        .ok_or_else(|| Error::Precondition("node selection needs a rooted tree".into()))?;
    let index = TreeIndex::rooted(t1, root)?;
    let n = index.len();
    let mut twin = vec![None; n];
    let mut open = vec![true; n];
    let mut status = BTreeMap::new();
    let mut visit_order = Vec::with_capacity(n);
    let mut singles = Vec::new();

    for (i, cluster) in clusters.clusters().iter().enumerate() {
        if cluster.len() > 2 {
            return Err(Error::Unsupported(format!("cluster {i} has {} points", cluster.len())));
        }
        let inside: Vec<usize> = cluster.iter().filter_map(|&p| index.local(p)).collect();
        match inside.as_slice() {
            [] => return Err(Error::Infeasible(format!("cluster {i} has no node in the tree"))),
            [x] => singles.push(*x),
            [a, b] => {
                twin[*a] = Some(*b);
                twin[*b] = Some(*a);
            }
            _ => unreachable!(),
        }
    }
    let mut covered = vec![false; n];
    for c in clusters.clusters() {
        for &p in c {
            if let Some(x) = index.local(p) {
                covered[x] = true;
            }
        }
    }
    if let Some(x) = covered.iter().position(|c| !c) {
        return Err(Error::Partition(format!(
            "tree node {} belongs to no cluster",
            index.id(x)
        )));
    }

    singles.sort_unstable();
    for &x in &singles {
        open[x] = false;
        status.insert(index.id(x), NodeStatus::Selected);
        visit_order.push(index.id(x));
    }

    let mut cursor = 0;
    let mut next = if open[index.root()] { Some(index.root()) } else { None };
    loop {
        let start = match next.take() {
            Some(x) => x,
            None => {
                while cursor < n && !open[cursor] {
                    cursor += 1;
                }
                if cursor == n {
                    break;
                }
                cursor
            }
        };
        let burned = twin[start].ok_or_else(|| Error::Invariant("open node without a twin".into()))?;
        open[start] = false;
        open[burned] = false;
        status.insert(index.id(start), NodeStatus::Selected);
        status.insert(index.id(burned), NodeStatus::Burned);
        visit_order.push(index.id(start));
        visit_order.push(index.id(burned));

        next = match index.parent(burned) {
            Some(p) if open[p] => Some(p),
            _ => index.children(burned).iter().copied().find(|&c| open[c]),
        };
    }
    Ok(NodeSelection { status, visit_order })
}

/// Links every selected node of `t1` to a selected node closer to the root
/// and at most three hops away.
///
/// Candidates are tried in order: parent, grandparent, great-grandparent,
/// and finally the node visited right after the grandparent was burned,
/// which the walk guarantees is a selected child of the grandparent.
pub fn build_t2(t1: &Tree, selection: &NodeSelection) -> Result<Tree> {
    let root = t1
        .root()
        .ok_or_else(|| Error::Precondition("building T2 needs a rooted tree".into()))?;
    if !selection.is_selected(root) {
        return Err(Error::Precondition(format!("root {root} is not selected")));
    }
    let index = TreeIndex::rooted(t1, root)?;
    let position: BTreeMap<PointId, usize> = selection.visit_order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let selected = |x: usize| selection.is_selected(index.id(x));
    let missing = |what: &str, x: usize| Error::Invariant(format!("burned {what} of {} has no parent", index.id(x)));

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for x in 0..index.len() {
        if !selected(x) {
            continue;
        }
        nodes.push(index.id(x));
        if x == index.root() {
            continue;
        }
        let p1 = index.parent(x).expect("non-root node has a parent");
        let target = if selected(p1) {
            p1
        } else {
            let p2 = index.parent(p1).ok_or_else(|| missing("parent", x))?;
            if selected(p2) {
                p2
            } else {
                let p3 = index.parent(p2).ok_or_else(|| missing("grandparent", x))?;
                if selected(p3) {
                    p3
                } else {
                    let after = position
                        .get(&index.id(p2))
                        .and_then(|&i| selection.visit_order.get(i + 1))
                        .and_then(|&p| index.local(p));
                    match after {
                        Some(c) if index.parent(c) == Some(p2) && selected(c) => c,
                        _ => {
                            return Err(Error::Invariant(format!(
                                "no selected node within three hops above {}",
                                index.id(x)
                            )))
                        }
                    }
                }
            }
        };
        edges.push(normalize(index.id(x), index.id(target)));
    }
    Tree::new(nodes, edges, Some(root)).map_err(|e| Error::Invariant(format!("T2 is not a tree: {e}")))
}

#[derive(Clone, Debug)]
pub struct GbstSolution {
    pub tree: Tree,
    pub t1: Tree,
    pub selection: NodeSelection,
    pub bottleneck: f64,
    pub t1_bottleneck: f64,
}

/// Picks the root of `T1`: the lowest node whose cluster has no other node
/// in `T1`, or else the lowest node overall.
fn t1_root(t1: &Tree, clusters: &ClusterPartition) -> PointId {
    clusters
        .clusters()
        .iter()
        .filter_map(|c| {
            let inside: Vec<PointId> = c.iter().copied().filter(|&p| t1.contains(p)).collect();
            (inside.len() == 1).then(|| inside[0])
        })
        .min()
        .unwrap_or(t1.nodes()[0])
}

/// 3-approximation for the generalized bottleneck spanning tree with
/// clusters of at most two points.
pub fn solve_2gbst(instance: &MetricInstance, clusters: &ClusterPartition) -> Result<GbstSolution> {
    if let Some(c) = clusters.clusters().iter().find(|c| c.len() > 2) {
        return Err(Error::Unsupported(format!("cluster {c:?} has more than two points")));
    }
    let t1 = build_t1(instance, clusters)?;
    let root = t1_root(&t1, clusters);
    let t1 = t1.with_root(root)?;
    let selection = select_nodes(&t1, clusters)?;
    let tree = build_t2(&t1, &selection)?;
    Ok(GbstSolution {
        bottleneck: tree.bottleneck(instance),
        t1_bottleneck: t1.bottleneck(instance),
        tree,
        t1,
        selection,
    })
}
