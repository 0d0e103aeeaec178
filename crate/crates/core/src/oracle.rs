//! Exhaustive solvers for tiny instances, used as ground truth.
//!
//! Every oracle refuses inputs above its enumeration cap with
//! [`Error::OracleSize`] instead of returning a truncated answer. Edgeless
//! optimal solutions (singleton trees) have optimum 0.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::metric::{ClusterPartition, MetricInstance, PointId, TuplePartition};
use crate::tours::{tour_bottleneck, TourSet};
use crate::tree::{minimum_spanning_tree, Forest, Tree};

pub const DBST_MAX_K: usize = 3;
pub const DBST_MAX_TUPLES: usize = 6;
pub const GBST_MAX_CLUSTERS: usize = 12;
pub const TOUR_MAX_POINTS: usize = 9;
/// Largest instance the partition search can represent.
pub const PBST_MAX_POINTS: usize = 64;
/// Default work limit for [`exact_pbst`], counted in search steps.
pub const PBST_SEARCH_BUDGET: u64 = 50_000_000;
/// Cap on the number of unordered partitions for [`exact_pbst_unreduced`].
pub const PBST_MAX_PARTITIONS: u128 = 1_000_000;

fn mst_bottleneck(instance: &MetricInstance, group: &[PointId]) -> Result<f64> {
    Ok(minimum_spanning_tree(instance, group)?.bottleneck(instance))
}

/// Calls `visit` with the `k` groups of every assignment of tuple members
/// to trees. With `reduce`, the first tuple keeps a fixed assignment.
fn for_each_assignment(
    tuples: &TuplePartition,
    reduce: bool,
    mut visit: impl FnMut(&[Vec<PointId>]) -> Result<()>,
) -> Result<()> {
    let k = tuples.k();
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let choices: Vec<usize> = (0..tuples.len())
        .map(|i| if i == 0 && reduce { 1 } else { perms.len() })
        .collect();
    let mut digits = vec![0usize; tuples.len()];
    let mut groups = vec![Vec::with_capacity(tuples.len()); k];
    loop {
        for g in groups.iter_mut() {
            g.clear();
        }
        for (tuple, &d) in tuples.tuples().iter().zip(&digits) {
            for (j, &slot) in perms[d].iter().enumerate() {
                groups[j].push(tuple[slot]);
            }
        }
        visit(&groups)?;
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(());
            }
            digits[i] += 1;
            if digits[i] < choices[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn check_dbst_cap(tuples: &TuplePartition) -> Result<()> {
    if tuples.k() > DBST_MAX_K || tuples.len() > DBST_MAX_TUPLES {
        return Err(Error::OracleSize(format!(
            "exact_dbst handles k <= {DBST_MAX_K} and at most {DBST_MAX_TUPLES} tuples, got k = {} and {}",
            tuples.k(),
            tuples.len()
        )));
    }
    Ok(())
}

fn check_tuples(instance: &MetricInstance, tuples: &TuplePartition) -> Result<()> {
    let covered: usize = tuples.tuples().iter().map(Vec::len).sum();
    if covered != instance.point_count() {
        return Err(Error::Partition(format!(
            "tuples cover {covered} points, the instance has {}",
            instance.point_count()
        )));
    }
    Ok(())
}

fn dbst_search(instance: &MetricInstance, tuples: &TuplePartition, reduce: bool) -> Result<(Forest, f64)> {
    check_dbst_cap(tuples)?;
    check_tuples(instance, tuples)?;
    let mut best: Option<(f64, Vec<Vec<PointId>>)> = None;
    for_each_assignment(tuples, reduce, |groups| {
        let mut worst = 0.0f64;
        for g in groups {
            worst = worst.max(mst_bottleneck(instance, g)?);
            if best.as_ref().is_some_and(|(b, _)| worst >= *b) {
                return Ok(());
            }
        }
        best = Some((worst, groups.to_vec()));
        Ok(())
    })?;
    let (optimum, groups) = best.expect("at least one assignment");
    let trees = groups
        .iter()
        .map(|g| minimum_spanning_tree(instance, g))
        .collect::<Result<Vec<_>>>()?;
    Ok((Forest::new(trees)?, optimum))
}

/// Optimal disjoint bottleneck spanning trees, each taking one point of
/// every tuple. Requires `k <= 3` and at most 6 tuples.
pub fn exact_dbst(instance: &MetricInstance, tuples: &TuplePartition) -> Result<(Forest, f64)> {
    dbst_search(instance, tuples, true)
}

/// [`exact_dbst`] without fixing the first tuple.
pub fn exact_dbst_unreduced(instance: &MetricInstance, tuples: &TuplePartition) -> Result<(Forest, f64)> {
    dbst_search(instance, tuples, false)
}

/// Optimal disjoint bottleneck tours, each visiting one point of every
/// tuple. Needs at least 3 tuples so that every tour is a genuine cycle.
pub fn exact_dbst_tours(instance: &MetricInstance, tuples: &TuplePartition) -> Result<(TourSet, f64)> {
    check_dbst_cap(tuples)?;
    check_tuples(instance, tuples)?;
    if tuples.len() < 3 {
        return Err(Error::DegenerateTour(format!("tours of {} points", tuples.len())));
    }
    let mut memo: HashMap<Vec<PointId>, (Vec<PointId>, f64)> = HashMap::new();
    let mut best: Option<(f64, Vec<Vec<PointId>>)> = None;
    for_each_assignment(tuples, true, |groups| {
        let mut worst = 0.0f64;
        let mut tours = Vec::with_capacity(groups.len());
        for g in groups {
            let mut key = g.clone();
            key.sort_unstable();
            if !memo.contains_key(&key) {
                let found = exact_bottleneck_tour(instance, &key)?;
                memo.insert(key.clone(), found);
            }
            let (tour, value) = &memo[&key];
            worst = worst.max(*value);
            tours.push(tour.clone());
        }
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            best = Some((worst, tours));
        }
        Ok(())
    })?;
    let (optimum, tours) = best.expect("at least one assignment");
    Ok((TourSet { tours }, optimum))
}

/// Optimal group spanning tree for clusters: the best minimum spanning tree
/// over every choice of one representative per cluster.
pub fn exact_gbst(instance: &MetricInstance, clusters: &ClusterPartition) -> Result<(Tree, f64)> {
    if clusters.len() > GBST_MAX_CLUSTERS {
        return Err(Error::OracleSize(format!(
            "exact_gbst handles at most {GBST_MAX_CLUSTERS} clusters, got {}",
            clusters.len()
        )));
    }
    let combos: u128 = clusters.clusters().iter().map(|c| c.len() as u128).product();
    if combos > 1 << GBST_MAX_CLUSTERS {
        return Err(Error::OracleSize(format!("{combos} representative choices")));
    }
    for c in clusters.clusters() {
        for &p in c {
            instance.check_point(p)?;
        }
    }
    let mut best: Option<(f64, Vec<PointId>)> = None;
    for choice in clusters
        .clusters()
        .iter()
        .map(|c| c.iter().copied())
        .multi_cartesian_product()
    {
        let value = mst_bottleneck(instance, &choice)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, choice));
        }
    }
    let (optimum, choice) = match best {
        Some(b) => b,
        // A single empty product: no clusters at all.
        None => return Err(Error::Partition("no clusters".into())),
    };
    Ok((minimum_spanning_tree(instance, &choice)?, optimum))
}

fn tour_search(instance: &MetricInstance, subset: &[PointId], reduce: bool) -> Result<(Vec<PointId>, f64)> {
    let mut points = subset.to_vec();
    points.sort_unstable();
    points.dedup();
    if points.len() > TOUR_MAX_POINTS {
        return Err(Error::OracleSize(format!(
            "exact_bottleneck_tour handles at most {TOUR_MAX_POINTS} points, got {}",
            points.len()
        )));
    }
    if points.len() < 3 {
        return Err(Error::DegenerateTour(format!("a tour over {} points", points.len())));
    }
    for &p in &points {
        instance.check_point(p)?;
    }
    let mut best: Option<(f64, Vec<PointId>)> = None;
    let mut consider = |tour: Vec<PointId>| {
        let value = tour_bottleneck(instance, &tour);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, tour));
        }
    };
    if reduce {
        let first = points[0];
        for rest in points[1..].iter().copied().permutations(points.len() - 1) {
            // Each cycle appears once per direction; keep one.
            if rest[0] > rest[rest.len() - 1] {
                continue;
            }
            let mut tour = Vec::with_capacity(points.len());
            tour.push(first);
            tour.extend(rest);
            consider(tour);
        }
    } else {
        for tour in points.iter().copied().permutations(points.len()) {
            consider(tour);
        }
    }
    let (value, tour) = best.expect("at least one tour");
    Ok((tour, value))
}

/// Optimal bottleneck tour through `subset` (3 to 9 points).
pub fn exact_bottleneck_tour(instance: &MetricInstance, subset: &[PointId]) -> Result<(Vec<PointId>, f64)> {
    tour_search(instance, subset, true)
}

/// [`exact_bottleneck_tour`] over all orderings, rotations and directions
/// included.
pub fn exact_bottleneck_tour_unreduced(instance: &MetricInstance, subset: &[PointId]) -> Result<(Vec<PointId>, f64)> {
    tour_search(instance, subset, false)
}

fn pbst_shape(instance: &MetricInstance, k: usize) -> Result<usize> {
    let total = instance.point_count();
    if k == 0 || total == 0 || !total.is_multiple_of(k) {
        return Err(Error::Partition(format!("{total} points cannot form {k} equal trees")));
    }
    Ok(total / k)
}

fn forest_of(instance: &MetricInstance, groups: &[Vec<PointId>]) -> Result<(Forest, f64)> {
    let trees = groups
        .iter()
        .map(|g| minimum_spanning_tree(instance, g))
        .collect::<Result<Vec<_>>>()?;
    let forest = Forest::new(trees)?;
    let value = forest.bottleneck(instance);
    Ok((forest, value))
}

/// Decides whether the points of `free` split into connected groups of
/// `size` in the graph given by `adj`. Groups are grown from the lowest free
/// point; remainders whose components are not multiples of `size` are cut
/// off, and remainders already shown infeasible are remembered.
struct PartitionSearch<'a> {
    adj: &'a [u64],
    size: u32,
    failed: HashSet<u64>,
    steps: u64,
    budget: u64,
    groups: Vec<u64>,
}

impl PartitionSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::OracleSize(format!(
                "exact_pbst exceeded its budget of {} search steps",
                self.budget
            )));
        }
        Ok(())
    }

    fn components_fit(&self, free: u64) -> bool {
        let mut left = free;
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut grow = comp;
            while grow != 0 {
                let x = grow.trailing_zeros() as usize;
                grow &= grow - 1;
                let new = self.adj[x] & left & !comp;
                comp |= new;
                grow |= new;
            }
            if !comp.count_ones().is_multiple_of(self.size) {
                return false;
            }
            left &= !comp;
        }
        true
    }

    fn solve(&mut self, free: u64) -> Result<bool> {
        if free == 0 {
            return Ok(true);
        }
        if self.failed.contains(&free) {
            return Ok(false);
        }
        self.tick()?;
        let start = free & free.wrapping_neg();
        let s = start.trailing_zeros() as usize;
        if self.grow(free, start, self.adj[s] & free & !start, 0)? {
            return Ok(true);
        }
        self.failed.insert(free);
        Ok(false)
    }

    /// Enumerates each connected superset of `set` exactly once: the lowest
    /// frontier point is either added, or banned for the rest of the branch.
    fn grow(&mut self, free: u64, set: u64, frontier: u64, banned: u64) -> Result<bool> {
        self.tick()?;
        if set.count_ones() == self.size {
            let rest = free & !set;
            if self.components_fit(rest) && self.solve(rest)? {
                self.groups.push(set);
                return Ok(true);
            }
            return Ok(false);
        }
        let mut frontier = frontier;
        let mut banned = banned;
        while frontier != 0 {
            let bit = frontier & frontier.wrapping_neg();
            frontier &= !bit;
            let x = bit.trailing_zeros() as usize;
            let next = (frontier | (self.adj[x] & free)) & !set & !bit & !banned;
            if self.grow(free, set | bit, next, banned)? {
                return Ok(true);
            }
            banned |= bit;
        }
        Ok(false)
    }
}

/// Optimal partition into `k` trees of equal size.
///
/// Binary search over candidate thresholds: a threshold is feasible when the
/// points split into equal groups that are connected using only edges no
/// longer than it.
pub fn exact_pbst(instance: &MetricInstance, k: usize) -> Result<(Forest, f64)> {
    exact_pbst_with_budget(instance, k, PBST_SEARCH_BUDGET)
}

pub fn exact_pbst_with_budget(instance: &MetricInstance, k: usize, budget: u64) -> Result<(Forest, f64)> {
    let size = pbst_shape(instance, k)?;
    let total = instance.point_count();
    if total > PBST_MAX_POINTS {
        return Err(Error::OracleSize(format!(
            "exact_pbst handles at most {PBST_MAX_POINTS} points, got {total}"
        )));
    }
    let mut thresholds: Vec<f64> = vec![0.0];
    for u in 0..total {
        for v in u + 1..total {
            thresholds.push(instance.dist(u, v));
        }
    }
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let all = if total == 64 { u64::MAX } else { (1u64 << total) - 1 };
    let mut steps = 0;
    let mut attempt = |t: f64| -> Result<Option<Vec<u64>>> {
        let adj: Vec<u64> = (0..total)
            .map(|u| {
                (0..total)
                    .filter(|&v| v != u && instance.dist(u, v) <= t)
                    .fold(0u64, |m, v| m | 1 << v)
            })
            .collect();
        let mut search = PartitionSearch {
            adj: &adj,
            size: size as u32,
            failed: HashSet::new(),
            steps,
            budget,
            groups: Vec::new(),
        };
        let ok = search.components_fit(all) && search.solve(all)?;
        steps = search.steps;
        Ok(ok.then_some(search.groups))
    };

    // The largest threshold makes the graph complete, so it is feasible.
    let (mut lo, mut hi) = (0, thresholds.len() - 1);
    let mut groups = attempt(thresholds[hi])?.expect("complete graph is feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match attempt(thresholds[mid])? {
            Some(g) => {
                hi = mid;
                groups = g;
            }
            None => lo = mid + 1,
        }
    }
    let mut groups: Vec<Vec<PointId>> = groups
        .into_iter()
        .map(|m| (0..total).filter(|&p| m >> p & 1 == 1).collect())
        .collect();
    groups.sort();
    forest_of(instance, &groups)
}

/// [`exact_pbst`] by listing every unordered partition into `k` groups.
pub fn exact_pbst_unreduced(instance: &MetricInstance, k: usize) -> Result<(Forest, f64)> {
    let size = pbst_shape(instance, k)?;
    let total = instance.point_count();
    let mut count: u128 = 1;
    let mut left = total as u128;
    for _ in 0..k {
        count = count.saturating_mul(binomial(left, size as u128));
        left -= size as u128;
    }
    let count = count / (1..=k as u128).product::<u128>();
    if count > PBST_MAX_PARTITIONS {
        return Err(Error::OracleSize(format!("{count} partitions to enumerate")));
    }
    let mut label = vec![usize::MAX; total];
    let mut best: Option<(f64, Vec<usize>)> = None;
    enumerate_partitions(instance, size, k, 0, &mut vec![0; k], &mut label, &mut best)?;
    let (_, label) = best.expect("at least one partition");
    let groups: Vec<Vec<PointId>> = (0..k)
        .map(|g| (0..total).filter(|&p| label[p] == g).collect())
        .collect();
    forest_of(instance, &groups)
}

fn binomial(n: u128, r: u128) -> u128 {
    (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Points are placed in order; a point may open group `g` only if groups
/// `0..g` are already open, which lists each unordered partition once.
fn enumerate_partitions(
    instance: &MetricInstance,
    size: usize,
    k: usize,
    point: usize,
    filled: &mut Vec<usize>,
    label: &mut Vec<usize>,
    best: &mut Option<(f64, Vec<usize>)>,
) -> Result<()> {
    if point == label.len() {
        let mut worst = 0.0f64;
        for g in 0..k {
            let members: Vec<PointId> = (0..label.len()).filter(|&p| label[p] == g).collect();
            worst = worst.max(mst_bottleneck(instance, &members)?);
        }
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            *best = Some((worst, label.clone()));
        }
        return Ok(());
    }
    let opened = filled.iter().take_while(|&&c| c > 0).count();
    for g in 0..k.min(opened + 1) {
        if filled[g] == size {
            continue;
        }
        filled[g] += 1;
        label[point] = g;
        enumerate_partitions(instance, size, k, point + 1, filled, label, best)?;
        filled[g] -= 1;
    }
    label[point] = usize::MAX;
    Ok(())
}
