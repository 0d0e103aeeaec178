//! Metric instances and the two partition annotations placed on them.
//!
//! A [`MetricInstance`] is a finite point set given either by Euclidean
//! coordinates or by an explicit distance matrix. Point identifiers are the
//! indices `0..point_count`. Explicit matrices are checked against the metric
//! axioms when loaded; coordinates always describe a metric.

use std::cmp::Ordering;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type PointId = usize;

/// Slack allowed on triangle-inequality checks, relative to the larger side.
///
/// Shortest-path closures computed in floating point can miss the inequality
/// by an ulp or two when the two sides are summed in a different order.
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Coordinates(Vec<Vec<f64>>),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricInstance {
    geometry: Geometry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonFinite {
        u: PointId,
        v: PointId,
    },
    Negative {
        u: PointId,
        v: PointId,
    },
    NonZeroDiagonal {
        u: PointId,
    },
    Asymmetric {
        u: PointId,
        v: PointId,
    },
    /// `d(u, w) > d(u, v) + d(v, w)`.
    Triangle {
        u: PointId,
        v: PointId,
        w: PointId,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricReport {
    pub violations: Vec<Violation>,
}

impl MetricReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl MetricInstance {
    pub fn from_coordinates(coordinates: Vec<Vec<f64>>) -> Result<Self> {
        if coordinates.is_empty() {
            return Err(Error::InvalidMetric("instance has no points".into()));
        }
        let dim = coordinates[0].len();
        for (i, c) in coordinates.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::InvalidMetric(format!(
                    "point {i} has dimension {} but point 0 has dimension {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMetric(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(Self {
            geometry: Geometry::Coordinates(coordinates),
        })
    }

    /// Builds an instance from an explicit matrix, rejecting it unless every
    /// metric axiom holds.
    pub fn from_matrix(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let instance = Self::from_matrix_unchecked(matrix)?;
        let report = instance.validate_metric();
        if let Some(first) = report.violations.first() {
            return Err(Error::InvalidMetric(format!(
                "{} violation(s), first: {first:?}",
                report.violations.len()
            )));
        }
        Ok(instance)
    }

    /// Builds an instance from a square matrix without checking the metric
    /// axioms. Use [`MetricInstance::validate_metric`] to inspect it.
    pub fn from_matrix_unchecked(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidMetric("instance has no points".into()));
        }
        if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidMetric(format!(
                "matrix row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(Self {
            geometry: Geometry::Matrix(matrix),
        })
    }

    pub fn from_geometry(geometry: Geometry) -> Result<Self> {
        match geometry {
            Geometry::Coordinates(c) => Self::from_coordinates(c),
            Geometry::Matrix(m) => Self::from_matrix(m),
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn point_count(&self) -> usize {
        match &self.geometry {
            Geometry::Coordinates(c) => c.len(),
            Geometry::Matrix(m) => m.len(),
        }
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.point_count()
    }

    pub fn check_point(&self, id: PointId) -> Result<()> {
        if id < self.point_count() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                id,
                count: self.point_count(),
            })
        }
    }

    /// Distance between two points, checking both identifiers.
    pub fn distance(&self, u: PointId, v: PointId) -> Result<f64> {
        self.check_point(u)?;
        self.check_point(v)?;
        Ok(self.dist(u, v))
    }

    /// Distance between two points known to be valid.
    ///
    /// Panics if either identifier is out of range.
    #[inline]
    pub fn dist(&self, u: PointId, v: PointId) -> f64 {
        match &self.geometry {
            Geometry::Matrix(m) => m[u][v],
            Geometry::Coordinates(c) => {
                if u == v {
                    return 0.0;
                }
                c[u].iter()
                    .zip(&c[v])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }

    /// Checks every axiom on explicit matrices; Euclidean instances always pass.
    pub fn validate_metric(&self) -> MetricReport {
        let m = match &self.geometry {
            Geometry::Coordinates(_) => return MetricReport::default(),
            Geometry::Matrix(m) => m,
        };
        let n = m.len();
        let mut violations = Vec::new();
        for u in 0..n {
            if m[u][u] != 0.0 {
                violations.push(Violation::NonZeroDiagonal { u });
            }
            for v in 0..n {
                let d = m[u][v];
                if !d.is_finite() {
                    violations.push(Violation::NonFinite { u, v });
                } else if d < 0.0 {
                    violations.push(Violation::Negative { u, v });
                }
                if u < v && m[u][v] != m[v][u] {
                    violations.push(Violation::Asymmetric { u, v });
                }
            }
        }
        for u in 0..n {
            for w in u + 1..n {
                for v in 0..n {
                    if v == u || v == w {
                        continue;
                    }
                    let detour = m[u][v] + m[v][w];
                    if m[u][w] > detour + TRIANGLE_TOLERANCE * detour.max(1.0) {
                        violations.push(Violation::Triangle { u, v, w });
                    }
                }
            }
        }
        MetricReport { violations }
    }
}

/// Total order on edges: by length, then by the normalized `(min, max)` pair.
pub fn cmp_edges(a: (f64, PointId, PointId), b: (f64, PointId, PointId)) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| (a.1, a.2).cmp(&(b.1, b.2)))
}

fn validate_groups(
    groups: &[Vec<PointId>],
    point_count: usize,
    size_ok: impl Fn(usize) -> bool,
    what: &str,
) -> Result<()> {
    let mut seen = vec![false; point_count];
    for (i, g) in groups.iter().enumerate() {
        if !size_ok(g.len()) {
            return Err(Error::Partition(format!("{what} {i} has invalid size {}", g.len())));
        }
        for &p in g {
            if p >= point_count {
                return Err(Error::PointOutOfRange {
                    id: p,
                    count: point_count,
                });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::Partition(format!("point {p} appears in more than one {what}")));
            }
        }
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(Error::Partition(format!("point {p} is not covered by any {what}")));
    }
    Ok(())
}

/// A partition of all `k * n` points into `n` groups of exactly `k` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuplePartition {
    k: usize,
    tuples: Vec<Vec<PointId>>,
}

impl TuplePartition {
    pub fn new(k: usize, tuples: Vec<Vec<PointId>>, point_count: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Partition(format!("tuple size must be at least 2, got {k}")));
        }
        if tuples.is_empty() {
            return Err(Error::Partition("no tuples".into()));
        }
        validate_groups(&tuples, point_count, |s| s == k, "tuple")?;
        Ok(Self { k, tuples })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tuples(&self) -> &[Vec<PointId>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// A partition of all points into clusters of between 1 and `k` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPartition {
    k: usize,
    clusters: Vec<Vec<PointId>>,
}

impl ClusterPartition {
    pub fn new(k: usize, clusters: Vec<Vec<PointId>>, point_count: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Partition(format!(
                "maximum cluster size must be at least 2, got {k}"
            )));
        }
        validate_groups(&clusters, point_count, |s| (1..=k).contains(&s), "cluster")?;
        Ok(Self { k, clusters })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clusters(&self) -> &[Vec<PointId>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Cluster index of every point.
    pub fn cluster_of(&self, point_count: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; point_count];
        for (i, c) in self.clusters.iter().enumerate() {
            for &p in c {
                of[p] = i;
            }
        }
        of
    }
}

/// On-disk instance format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub points: Geometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<Vec<PointId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<Vec<PointId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl InstanceFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    pub fn instance(&self) -> Result<MetricInstance> {
        MetricInstance::from_geometry(self.points.clone())
    }

    /// Tuple partition, taking the tuple size from the first tuple when `k` is absent.
    pub fn tuple_partition(&self, point_count: usize) -> Result<TuplePartition> {
        let tuples = self
            .tuples
            .clone()
            .ok_or_else(|| Error::Partition("instance file has no \"tuples\"".into()))?;
        let k = self.k.or_else(|| tuples.first().map(Vec::len)).unwrap_or(0);
        TuplePartition::new(k, tuples, point_count)
    }

    pub fn cluster_partition(&self, point_count: usize) -> Result<ClusterPartition> {
        let clusters = self
            .clusters
            .clone()
            .ok_or_else(|| Error::Partition("instance file has no \"clusters\"".into()))?;
        ClusterPartition::new(2, clusters, point_count)
    }
}
