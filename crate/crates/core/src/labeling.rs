//! Complete systems of representatives for two simultaneous partitions, and
//! the k-labeling obtained by peeling such systems off one at a time.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::metric::PointId;

/// A complete system of representatives: `points[i]` lies in `a_groups[i]`
/// and in `b_groups[perm[i]]`, and `perm` is a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representatives {
    pub points: Vec<PointId>,
    pub perm: Vec<usize>,
}

/// Assignment of one of `k` labels (`0..k`) to every point such that each
/// group of both partitions carries every label exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    k: usize,
    labels: BTreeMap<PointId, usize>,
}

impl Labeling {
    pub fn from_map(k: usize, labels: BTreeMap<PointId, usize>) -> Self {
        Self { k, labels }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self, point: PointId) -> Option<usize> {
        self.labels.get(&point).copied()
    }

    pub fn labels(&self) -> &BTreeMap<PointId, usize> {
        &self.labels
    }

    /// Points carrying label `label`, in increasing id order.
    pub fn class(&self, label: usize) -> Vec<PointId> {
        self.labels
            .iter()
            .filter(|&(_, &l)| l == label)
            .map(|(&p, _)| p)
            .collect()
    }

    /// Checks that every point of both partitions is labeled and that each
    /// group shows all `k` labels.
    pub fn validate(&self, a_groups: &[Vec<PointId>], b_groups: &[Vec<PointId>]) -> Result<()> {
        for (name, groups) in [("A", a_groups), ("B", b_groups)] {
            for (i, g) in groups.iter().enumerate() {
                let mut seen = vec![false; self.k];
                for &p in g {
                    let l = self
                        .label(p)
                        .ok_or_else(|| Error::Invariant(format!("point {p} has no label")))?;
                    if l >= self.k || std::mem::replace(&mut seen[l], true) {
                        return Err(Error::Invariant(format!(
                            "group {name}{i} repeats or exceeds label {l}"
                        )));
                    }
                }
                if seen.iter().any(|s| !s) {
                    return Err(Error::Invariant(format!("group {name}{i} misses a label")));
                }
            }
        }
        Ok(())
    }
}

/// Checks that both lists partition the same universe into equally many
/// groups of one common size, returning that size.
pub fn validate_double_partition(a_groups: &[Vec<PointId>], b_groups: &[Vec<PointId>]) -> Result<usize> {
    if a_groups.len() != b_groups.len() {
        return Err(Error::Partition(format!(
            "{} groups against {} groups",
            a_groups.len(),
            b_groups.len()
        )));
    }
    let k = a_groups.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::Partition("groups must be non-empty".into()));
    }
    let mut owner: HashMap<PointId, usize> = HashMap::new();
    for (i, g) in a_groups.iter().enumerate() {
        if g.len() != k {
            return Err(Error::Partition(format!(
                "group A{i} has size {}, expected {k}",
                g.len()
            )));
        }
        for &p in g {
            if owner.insert(p, i).is_some() {
                return Err(Error::Partition(format!("point {p} is in two A groups")));
            }
        }
    }
    let mut seen: HashMap<PointId, usize> = HashMap::new();
    for (j, g) in b_groups.iter().enumerate() {
        if g.len() != k {
            return Err(Error::Partition(format!(
                "group B{j} has size {}, expected {k}",
                g.len()
            )));
        }
        for &p in g {
            if !owner.contains_key(&p) {
                return Err(Error::Partition(format!("point {p} is in B{j} but in no A group")));
            }
            if seen.insert(p, j).is_some() {
                return Err(Error::Partition(format!("point {p} is in two B groups")));
            }
        }
    }
    Ok(k)
}

const FREE: usize = usize::MAX;

/// Maximum matching in a bipartite graph with `adj[left]` listing right
/// vertices in `0..right_count` (Hopcroft-Karp, `O(E sqrt V)`).
///
/// Returns the right partner of every left vertex, or `usize::MAX`.
pub fn max_bipartite_matching(adj: &[Vec<usize>], right_count: usize) -> Vec<usize> {
    let n = adj.len();
    let mut match_l = vec![FREE; n];
    let mut match_r = vec![FREE; right_count];

    // Greedy start.
    for u in 0..n {
        if let Some(&v) = adj[u].iter().find(|&&v| match_r[v] == FREE) {
            match_l[u] = v;
            match_r[v] = u;
        }
    }

    let mut dist = vec![0usize; n];
    let mut it = vec![0usize; n];
    loop {
        let mut queue = VecDeque::new();
        for u in 0..n {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    reachable_free = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !reachable_free {
            break;
        }
        it.iter_mut().for_each(|x| *x = 0);
        let mut augmented = false;
        for start in 0..n {
            if match_l[start] == FREE && augment(start, adj, &mut match_l, &mut match_r, &mut dist, &mut it) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    match_l
}

fn augment(
    start: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    let mut stack = vec![start];
    let mut via: Vec<usize> = Vec::new();
    while let Some(&u) = stack.last() {
        if it[u] < adj[u].len() {
            let v = adj[u][it[u]];
            it[u] += 1;
            let w = match_r[v];
            if w == FREE {
                // stack[i] -> via[i] for i < last, and the top takes v.
                via.push(v);
                for (&l, &r) in stack.iter().zip(&via) {
                    match_l[l] = r;
                    match_r[r] = l;
                }
                return true;
            }
            if dist[w] != usize::MAX && dist[w] == dist[u] + 1 {
                stack.push(w);
                via.push(v);
            }
        } else {
            dist[u] = usize::MAX;
            stack.pop();
            via.pop();
        }
    }
    false
}

/// Finds a complete system of representatives for two partitions of the same
/// `k * n` points into `n` groups of `k`.
///
/// Builds the bipartite intersection graph of the groups and extracts a
/// perfect matching; each matched pair contributes the lowest id in its
/// intersection.
pub fn representatives(a_groups: &[Vec<PointId>], b_groups: &[Vec<PointId>]) -> Result<Representatives> {
    validate_double_partition(a_groups, b_groups)?;
    system_of_representatives(a_groups, b_groups)
}

fn system_of_representatives(a_groups: &[Vec<PointId>], b_groups: &[Vec<PointId>]) -> Result<Representatives> {
    let n = a_groups.len();
    let b_of: HashMap<PointId, usize> = b_groups
        .iter()
        .enumerate()
        .flat_map(|(j, g)| g.iter().map(move |&p| (p, j)))
        .collect();
    let adj: Vec<Vec<usize>> = a_groups
        .iter()
        .map(|g| {
            let mut js: Vec<usize> = g.iter().map(|p| b_of[p]).collect();
            js.sort_unstable();
            js.dedup();
            js
        })
        .collect();
    let matching = max_bipartite_matching(&adj, n);
    let mut points = Vec::with_capacity(n);
    for (i, &j) in matching.iter().enumerate() {
        if j == FREE {
            // Ruled out by König's theorem once the partitions are valid.
            return Err(Error::Invariant(format!("group A{i} left unmatched")));
        }
        let rep = a_groups[i].iter().copied().filter(|p| b_of[p] == j).min().unwrap();
        points.push(rep);
    }
    Ok(Representatives { points, perm: matching })
}

/// Labels all points with `k` labels so that every group of both partitions
/// sees each label once.
///
/// Runs `k - 1` rounds: each round finds a system of representatives, gives
/// it the round's label and removes it, leaving two partitions with groups
/// one smaller. The final singletons take the last label.
pub fn konig_labeling(a_groups: &[Vec<PointId>], b_groups: &[Vec<PointId>], k: usize) -> Result<Labeling> {
    let size = validate_double_partition(a_groups, b_groups)?;
    if size != k {
        return Err(Error::Partition(format!("groups have size {size}, expected {k}")));
    }
    let mut a: Vec<Vec<PointId>> = a_groups.to_vec();
    let mut b: Vec<Vec<PointId>> = b_groups.to_vec();
    let mut labels = BTreeMap::new();
    for round in 0..k - 1 {
        let reps = system_of_representatives(&a, &b)?;
        for (i, &p) in reps.points.iter().enumerate() {
            labels.insert(p, round);
            a[i].retain(|&x| x != p);
            let j = reps.perm[i];
            b[j].retain(|&x| x != p);
        }
        match validate_double_partition(&a, &b) {
            Ok(s) if s == k - round - 1 => {}
            Ok(s) => return Err(Error::Invariant(format!("round {round} left groups of size {s}"))),
            Err(e) => return Err(Error::Invariant(format!("round {round} broke the partitions: {e}"))),
        }
    }
    for g in &a {
        labels.insert(g[0], k - 1);
    }
    Ok(Labeling { k, labels })
}
