//! Instance generators, fixtures, single runs producing result JSON, and
//! batch experiments producing CSV records.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::dbst::solve_dbst;
use crate::error::{Error, Result};
use crate::gbst::solve_2gbst;
use crate::metric::{ClusterPartition, InstanceFile, MetricInstance, PointId, TuplePartition};
use crate::oracle::{exact_bottleneck_tour, exact_dbst, exact_dbst_tours, exact_gbst, exact_pbst};
use crate::pbst::solve_pbst;
use crate::tours::lift_to_tours;
use crate::tree::{Forest, Tree, TreeIndex};

/// Tolerance for comparing ratios against 1 and against proven factors.
pub const RATIO_TOLERANCE: f64 = 1e-9;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// Uniform points in the unit cube.
    Euclidean { dim: usize, n_points: usize },
    /// Shortest-path closure of random edge weights on a complete graph.
    RandomMetric { n: usize },
    /// Unit-spaced line of 8 points with five clusters whose best spanning
    /// tree needs an edge of length 3.
    FixtureGbstPath8,
    /// Star with `m` leaves under its path metric.
    FixtureStar { m: usize },
    /// Spider with `k + 1` legs of `k - 1` nodes under its path metric.
    FixtureSpider { k: usize },
}

impl Generator {
    /// Short name without commas, used in CSV rows.
    pub fn label(&self) -> String {
        match self {
            Generator::Euclidean { dim, n_points } => format!("euclidean-d{dim}-n{n_points}"),
            Generator::RandomMetric { n } => format!("random-metric-n{n}"),
            Generator::FixtureGbstPath8 => "fixture-gbst-path8".into(),
            Generator::FixtureStar { m } => format!("fixture-star-m{m}"),
            Generator::FixtureSpider { k } => format!("fixture-spider-k{k}"),
        }
    }

    pub fn generate(&self, rng: &mut impl Rng) -> Result<MetricInstance> {
        match *self {
            Generator::Euclidean { dim, n_points } => {
                if dim == 0 || n_points == 0 {
                    return Err(Error::Generator("euclidean needs dim >= 1 and n_points >= 1".into()));
                }
                let coords = (0..n_points)
                    .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
                    .collect();
                MetricInstance::from_coordinates(coords)
            }
            Generator::RandomMetric { n } => {
                if n == 0 {
                    return Err(Error::Generator("random-metric needs n >= 1".into()));
                }
                random_metric(n, rng)
            }
            Generator::FixtureGbstPath8 => Ok(gbst_path8()?.0),
            Generator::FixtureStar { m } => {
                if m == 0 {
                    return Err(Error::Generator("a star needs at least one leaf".into()));
                }
                tree_metric(&star_tree(m))
            }
            Generator::FixtureSpider { k } => tree_metric(&spider_tree(k)?),
        }
    }

    /// Clusters that belong to the fixture itself, if any.
    pub fn fixed_clusters(&self) -> Result<Option<ClusterPartition>> {
        match self {
            Generator::FixtureGbstPath8 => Ok(Some(gbst_path8()?.1)),
            _ => Ok(None),
        }
    }
}

fn random_metric(n: usize, rng: &mut impl Rng) -> Result<MetricInstance> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(0.05..1.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    MetricInstance::from_matrix(d)
}

/// The hop metric of a tree whose nodes are exactly `0..len`.
pub fn tree_metric(tree: &Tree) -> Result<MetricInstance> {
    let n = tree.len();
    if tree.nodes().iter().enumerate().any(|(i, &p)| i != p) {
        return Err(Error::Generator("tree nodes must be 0..len".into()));
    }
    let index = TreeIndex::new(tree);
    let matrix = (0..n)
        .map(|a| (0..n).map(|b| index.hops_local(a, b) as f64).collect())
        .collect();
    MetricInstance::from_matrix(matrix)
}

/// Star with center 0 and leaves `1..=m`.
pub fn star_tree(m: usize) -> Tree {
    Tree::new((0..=m).collect(), (1..=m).map(|l| (0, l)).collect(), Some(0)).expect("a star is a tree")
}

/// Spider on `k * k` nodes: center 0 and `k + 1` legs of `k - 1` nodes, leg
/// `i` holding `1 + i(k-1) .. (i+1)(k-1)` outward. Rooted at the center.
pub fn spider_tree(k: usize) -> Result<Tree> {
    if k < 2 {
        return Err(Error::Generator(format!("spider needs k >= 2, got {k}")));
    }
    let mut edges = Vec::new();
    let mut next = 1;
    for _ in 0..=k {
        let mut prev = 0;
        for _ in 0..k - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Tree::new((0..next).collect(), edges, Some(0))
}

/// Unit line `0..8` with clusters {0}, {1,3}, {2,5}, {4,6}, {7}. Every
/// choice of representatives leaves a gap of 3 somewhere on the line; the
/// exact oracle is run to confirm it.
pub fn gbst_path8() -> Result<(MetricInstance, ClusterPartition)> {
    let instance = MetricInstance::from_coordinates((0..8).map(|x| vec![x as f64]).collect())?;
    let clusters = ClusterPartition::new(2, vec![vec![0], vec![1, 3], vec![2, 5], vec![4, 6], vec![7]], 8)?;
    let (_, optimum) = exact_gbst(&instance, &clusters)?;
    if optimum != 3.0 {
        return Err(Error::Generator(format!(
            "path fixture optimum is {optimum}, expected 3"
        )));
    }
    Ok((instance, clusters))
}

/// Uniformly random grouping of `0..point_count` into tuples of `k`.
pub fn random_tuples(point_count: usize, k: usize, rng: &mut impl Rng) -> Result<TuplePartition> {
    if k < 2 || point_count == 0 || !point_count.is_multiple_of(k) {
        return Err(Error::Generator(format!(
            "{point_count} points cannot form tuples of {k}"
        )));
    }
    let mut points: Vec<PointId> = (0..point_count).collect();
    points.shuffle(rng);
    TuplePartition::new(k, points.chunks(k).map(<[_]>::to_vec).collect(), point_count)
}

/// Random pairing of `0..point_count` in which each cluster is a singleton
/// with probability `singleton`.
pub fn random_clusters(point_count: usize, singleton: f64, rng: &mut impl Rng) -> Result<ClusterPartition> {
    let mut points: Vec<PointId> = (0..point_count).collect();
    points.shuffle(rng);
    let mut clusters = Vec::new();
    let mut rest = points.as_slice();
    while !rest.is_empty() {
        let take = if rest.len() >= 2 && !rng.gen_bool(singleton) {
            2
        } else {
            1
        };
        clusters.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    ClusterPartition::new(2, clusters, point_count)
}

/// Random tree on `0..n`: a random recursive tree under a random relabeling.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Tree {
    let mut label: Vec<PointId> = (0..n).collect();
    label.shuffle(rng);
    let edges = (1..n).map(|i| (label[i], label[rng.gen_range(0..i)])).collect();
    Tree::new((0..n).collect(), edges, None).expect("random recursive trees are trees")
}

/// Two independent random partitions of `0..k*n` into `n` groups of `k`.
pub fn random_double_partition(k: usize, n: usize, rng: &mut impl Rng) -> (Vec<Vec<PointId>>, Vec<Vec<PointId>>) {
    let mut draw = || {
        let mut points: Vec<PointId> = (0..k * n).collect();
        points.shuffle(rng);
        points.chunks(k).map(<[_]>::to_vec).collect::<Vec<_>>()
    };
    let a = draw();
    let b = draw();
    (a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Dbst,
    Gbst,
    Pbst,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Dbst, Problem::Gbst, Problem::Pbst];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Dbst => "dbst",
            Problem::Gbst => "gbst",
            Problem::Pbst => "pbst",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown problem {s:?}")))
    }
}

/// Proven approximation factor of the solver for `problem` with `k` trees.
pub fn proven_factor(problem: Problem, k: usize) -> f64 {
    match problem {
        Problem::Dbst => (3 * k - 2) as f64,
        Problem::Gbst => 3.0,
        Problem::Pbst if k <= 3 => 2.0,
        Problem::Pbst => 3.0,
    }
}

/// `achieved / optimal`; 1 when both are 0 and undefined when only the
/// optimum is 0.
pub fn ratio(achieved: f64, optimal: f64) -> Option<f64> {
    if optimal > 0.0 {
        Some(achieved / optimal)
    } else if achieved == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub k: Option<usize>,
    pub exact: bool,
    pub tours: bool,
}

fn resolve_k(file: &InstanceFile, opts: &RunOptions) -> Result<Option<usize>> {
    match (opts.k, file.k) {
        (Some(a), Some(b)) if a != b => Err(Error::Precondition(format!(
            "--k {a} conflicts with k = {b} in the file"
        ))),
        (a, b) => Ok(a.or(b)),
    }
}

fn tuples_for(file: &InstanceFile, instance: &MetricInstance, opts: &RunOptions) -> Result<TuplePartition> {
    let tuples = file.tuple_partition(instance.point_count())?;
    if let Some(k) = resolve_k(file, opts)? {
        if k != tuples.k() {
            return Err(Error::Precondition(format!(
                "k = {k} but the tuples have {} points",
                tuples.k()
            )));
        }
    }
    Ok(tuples)
}

fn pbst_k(file: &InstanceFile, opts: &RunOptions) -> Result<usize> {
    resolve_k(file, opts)?.ok_or_else(|| Error::Precondition("pbst needs k (--k or \"k\" in the file)".into()))
}

fn put_exact(out: &mut Map<String, Value>, achieved: f64, optimal: f64) {
    out.insert("optimal".into(), json!(optimal));
    out.insert("ratio".into(), json!(ratio(achieved, optimal)));
}

fn put_tours(out: &mut Map<String, Value>, forest: &Forest, instance: &MetricInstance) -> Result<f64> {
    let (set, bottleneck) = lift_to_tours(forest, instance)?;
    out.insert("tours".into(), json!(set.tours));
    out.insert("tour_bottleneck".into(), json!(bottleneck));
    Ok(bottleneck)
}

/// Solves one instance and reports the result as a JSON object with sorted
/// keys, so equal inputs give byte-identical output.
pub fn run(problem: Problem, file: &InstanceFile, opts: &RunOptions) -> Result<Value> {
    let instance = file.instance()?;
    let mut out = Map::new();
    out.insert("problem".into(), json!(problem.name()));
    out.insert("points".into(), json!(instance.point_count()));
    match problem {
        Problem::Dbst => {
            let tuples = tuples_for(file, &instance, opts)?;
            let sol = solve_dbst(&instance, &tuples)?;
            out.insert("k".into(), json!(tuples.k()));
            out.insert("n".into(), json!(tuples.len()));
            out.insert("trees".into(), json!(sol.forest.trees));
            out.insert("bottleneck".into(), json!(sol.bottleneck));
            out.insert("mst_bottleneck".into(), json!(sol.mst_bottleneck));
            out.insert("shortcut".into(), json!(sol.shortcut));
            if let Some(c) = &sol.construction {
                out.insert("labels".into(), json!(c.labeling.labels()));
            }
            if opts.exact {
                let (_, optimal) = exact_dbst(&instance, &tuples)?;
                put_exact(&mut out, sol.bottleneck, optimal);
            }
            if opts.tours {
                let achieved = put_tours(&mut out, &sol.forest, &instance)?;
                if opts.exact {
                    let (_, optimal) = exact_dbst_tours(&instance, &tuples)?;
                    out.insert("tour_optimal".into(), json!(optimal));
                    out.insert("tour_ratio".into(), json!(ratio(achieved, optimal)));
                }
            }
        }
        Problem::Gbst => {
            let clusters = file.cluster_partition(instance.point_count())?;
            let sol = solve_2gbst(&instance, &clusters)?;
            out.insert("tree".into(), json!(sol.tree));
            out.insert("selected".into(), json!(sol.selection.selected()));
            out.insert("bottleneck".into(), json!(sol.bottleneck));
            out.insert("t1_bottleneck".into(), json!(sol.t1_bottleneck));
            if opts.exact {
                let (_, optimal) = exact_gbst(&instance, &clusters)?;
                put_exact(&mut out, sol.bottleneck, optimal);
            }
            if opts.tours {
                put_tours(&mut out, &Forest::new(vec![sol.tree])?, &instance)?;
            }
        }
        Problem::Pbst => {
            let k = pbst_k(file, opts)?;
            let sol = solve_pbst(&instance, k)?;
            out.insert("k".into(), json!(k));
            out.insert("n".into(), json!(instance.point_count() / k));
            out.insert("trees".into(), json!(sol.forest.trees));
            out.insert("bottleneck".into(), json!(sol.bottleneck));
            out.insert("mst_bottleneck".into(), json!(sol.mst_bottleneck));
            if opts.exact {
                let (_, optimal) = exact_pbst(&instance, k)?;
                put_exact(&mut out, sol.bottleneck, optimal);
            }
            if opts.tours {
                put_tours(&mut out, &sol.forest, &instance)?;
            }
        }
    }
    Ok(Value::Object(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleProblem {
    Dbst,
    Gbst,
    Pbst,
    /// Single bottleneck tour through all points.
    Tour,
}

/// Runs an exact oracle on the instance.
pub fn run_oracle(problem: OracleProblem, file: &InstanceFile, opts: &RunOptions) -> Result<Value> {
    let instance = file.instance()?;
    let mut out = Map::new();
    match problem {
        OracleProblem::Dbst => {
            let tuples = tuples_for(file, &instance, opts)?;
            let (forest, optimal) = exact_dbst(&instance, &tuples)?;
            out.insert("problem".into(), json!("dbst"));
            out.insert("trees".into(), json!(forest.trees));
            out.insert("optimal".into(), json!(optimal));
            if opts.tours {
                let (set, tour_optimal) = exact_dbst_tours(&instance, &tuples)?;
                out.insert("tours".into(), json!(set.tours));
                out.insert("tour_optimal".into(), json!(tour_optimal));
            }
        }
        OracleProblem::Gbst => {
            let clusters = file.cluster_partition(instance.point_count())?;
            let (tree, optimal) = exact_gbst(&instance, &clusters)?;
            out.insert("problem".into(), json!("gbst"));
            out.insert("tree".into(), json!(tree));
            out.insert("optimal".into(), json!(optimal));
        }
        OracleProblem::Pbst => {
            let k = pbst_k(file, opts)?;
            let (forest, optimal) = exact_pbst(&instance, k)?;
            out.insert("problem".into(), json!("pbst"));
            out.insert("trees".into(), json!(forest.trees));
            out.insert("optimal".into(), json!(optimal));
        }
        OracleProblem::Tour => {
            let all: Vec<PointId> = instance.points().collect();
            let (tour, optimal) = exact_bottleneck_tour(&instance, &all)?;
            out.insert("problem".into(), json!("tour"));
            out.insert("tour".into(), json!(tour));
            out.insert("optimal".into(), json!(optimal));
        }
    }
    Ok(Value::Object(out))
}

/// Instance file for `generator` and `seed`, with random tuples of `k` when
/// `k` is given and random clusters when `clusters` is set. Fixtures that
/// come with clusters always include them.
pub fn generate_file(generator: &Generator, seed: u64, k: Option<usize>, clusters: bool) -> Result<InstanceFile> {
    let mut rng = seeded_rng(seed);
    let instance = generator.generate(&mut rng)?;
    let n = instance.point_count();
    let tuples = match k {
        Some(k) => Some(random_tuples(n, k, &mut rng)?.tuples().to_vec()),
        None => None,
    };
    let clusters = match generator.fixed_clusters()? {
        Some(c) => Some(c.clusters().to_vec()),
        None if clusters => Some(random_clusters(n, 0.25, &mut rng)?.clusters().to_vec()),
        None => None,
    };
    Ok(InstanceFile {
        points: instance.geometry().clone(),
        tuples,
        clusters,
        k,
    })
}

fn default_k() -> usize {
    2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchConfig {
    pub generators: Vec<Generator>,
    pub problems: Vec<Problem>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub generator: String,
    pub seed: u64,
    pub problem: Problem,
    pub k: usize,
    pub n: usize,
    pub achieved: f64,
    pub optimal: Option<f64>,
    pub ratio: Option<f64>,
    pub millis: f64,
}

impl ExperimentRecord {
    /// Ratio at least 1 and at most the proven factor, within tolerance.
    pub fn within_bounds(&self) -> bool {
        self.ratio
            .is_none_or(|r| r >= 1.0 - RATIO_TOLERANCE && r <= proven_factor(self.problem, self.k) + RATIO_TOLERANCE)
    }
}

fn oracle_value(found: Result<f64>) -> Result<Option<f64>> {
    match found {
        Ok(v) => Ok(Some(v)),
        Err(Error::OracleSize(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs one experiment. The instance and partitions depend only on the
/// generator, seed and problem.
pub fn run_record(
    generator: &Generator,
    seed: u64,
    problem: Problem,
    k: usize,
    exact: bool,
) -> Result<ExperimentRecord> {
    let mut rng = seeded_rng(seed);
    let instance = generator.generate(&mut rng)?;
    let points = instance.point_count();
    let (n, achieved, optimal, elapsed) = match problem {
        Problem::Dbst => {
            let tuples = random_tuples(points, k, &mut rng)?;
            let start = Instant::now();
            let sol = solve_dbst(&instance, &tuples)?;
            let elapsed = start.elapsed();
            let optimal = if exact {
                oracle_value(exact_dbst(&instance, &tuples).map(|r| r.1))?
            } else {
                None
            };
            (tuples.len(), sol.bottleneck, optimal, elapsed)
        }
        Problem::Gbst => {
            let clusters = match generator.fixed_clusters()? {
                Some(c) => c,
                None => random_clusters(points, 0.25, &mut rng)?,
            };
            let start = Instant::now();
            let sol = solve_2gbst(&instance, &clusters)?;
            let elapsed = start.elapsed();
            let optimal = if exact {
                oracle_value(exact_gbst(&instance, &clusters).map(|r| r.1))?
            } else {
                None
            };
            (clusters.len(), sol.bottleneck, optimal, elapsed)
        }
        Problem::Pbst => {
            let start = Instant::now();
            let sol = solve_pbst(&instance, k)?;
            let elapsed = start.elapsed();
            let optimal = if exact {
                oracle_value(exact_pbst(&instance, k).map(|r| r.1))?
            } else {
                None
            };
            (points / k, sol.bottleneck, optimal, elapsed)
        }
    };
    let k = if problem == Problem::Gbst { 2 } else { k };
    Ok(ExperimentRecord {
        generator: generator.label(),
        seed,
        problem,
        k,
        n,
        achieved,
        optimal,
        ratio: optimal.and_then(|o| ratio(achieved, o)),
        millis: (elapsed.as_secs_f64() * 1e6).round() / 1e3,
    })
}

/// Runs every generator, seed and problem combination in parallel. Records
/// come back ordered by generator, then seed, then problem, as listed in
/// the config.
pub fn batch(config: &BatchConfig) -> Result<Vec<ExperimentRecord>> {
    let jobs: Vec<(&Generator, u64, Problem)> = config
        .generators
        .iter()
        .flat_map(|g| {
            config
                .seeds
                .iter()
                .flat_map(move |&s| config.problems.iter().map(move |&p| (g, s, p)))
        })
        .collect();
    jobs.par_iter()
        .map(|&(g, seed, p)| {
            run_record(g, seed, p, config.k, config.exact).map_err(|e| match e {
                Error::Io(_) | Error::Json(_) => e,
                other => Error::Domain(format!("{} seed {seed} {p}: {other}", g.label())),
            })
        })
        .collect()
}

pub fn write_csv<W: std::io::Write>(records: &[ExperimentRecord], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for r in records {
        out.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_fixture_distances() {
        let inst = Generator::FixtureStar { m: 3 }.generate(&mut seeded_rng(0)).unwrap();
        assert_eq!(inst.point_count(), 4);
        assert_eq!(inst.dist(0, 2), 1.0);
        assert_eq!(inst.dist(1, 3), 2.0);
    }

    #[test]
    fn spider_fixture_size() {
        let inst = Generator::FixtureSpider { k: 4 }.generate(&mut seeded_rng(0)).unwrap();
        assert_eq!(inst.point_count(), 16);
        assert_eq!(inst.dist(3, 6), 6.0);
    }

    #[test]
    fn euclidean_is_seeded() {
        let g = Generator::Euclidean { dim: 2, n_points: 10 };
        let a = g.generate(&mut seeded_rng(7)).unwrap();
        let b = g.generate(&mut seeded_rng(7)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, g.generate(&mut seeded_rng(8)).unwrap());
    }

    #[test]
    fn random_metric_is_metric() {
        let inst = Generator::RandomMetric { n: 9 }.generate(&mut seeded_rng(3)).unwrap();
        assert!(inst.validate_metric().is_ok());
    }

    #[test]
    fn generator_json_tags() {
        let g: Generator = serde_json::from_str(r#"{"kind":"random-metric","n":5}"#).unwrap();
        assert_eq!(g, Generator::RandomMetric { n: 5 });
        let g: Generator = serde_json::from_str(r#"{"kind":"fixture-gbst-path8"}"#).unwrap();
        assert_eq!(g, Generator::FixtureGbstPath8);
    }

    #[test]
    fn bad_params() {
        assert!(Generator::FixtureSpider { k: 1 }.generate(&mut seeded_rng(0)).is_err());
        assert!(Generator::Euclidean { dim: 0, n_points: 3 }
            .generate(&mut seeded_rng(0))
            .is_err());
        assert!(random_tuples(5, 2, &mut seeded_rng(0)).is_err());
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(ratio(2.0, 1.0), Some(2.0));
        assert_eq!(ratio(0.0, 0.0), Some(1.0));
        assert_eq!(ratio(1.0, 0.0), None);
    }

    #[test]
    fn run_is_deterministic() {
        let file = generate_file(&Generator::Euclidean { dim: 2, n_points: 8 }, 5, Some(2), true).unwrap();
        let opts = RunOptions {
            exact: true,
            tours: true,
            ..Default::default()
        };
        for p in Problem::ALL {
            let a = serde_json::to_string(&run(p, &file, &opts).unwrap()).unwrap();
            let b = serde_json::to_string(&run(p, &file, &opts).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn batch_rows_keep_config_order() {
        let config = BatchConfig {
            generators: vec![
                Generator::Euclidean { dim: 2, n_points: 6 },
                Generator::RandomMetric { n: 6 },
            ],
            problems: vec![Problem::Dbst, Problem::Pbst],
            seeds: vec![3, 1],
            k: 2,
            exact: true,
        };
        let records = batch(&config).unwrap();
        let keys: Vec<(String, u64, Problem)> = records
            .iter()
            .map(|r| (r.generator.clone(), r.seed, r.problem))
            .collect();
        assert_eq!(keys[0], ("euclidean-d2-n6".to_string(), 3, Problem::Dbst));
        assert_eq!(keys[1], ("euclidean-d2-n6".to_string(), 3, Problem::Pbst));
        assert_eq!(keys[2].1, 1);
        assert_eq!(keys.len(), 8);
        assert!(records.iter().all(ExperimentRecord::within_bounds));
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("generator,seed,problem,k,n,achieved,optimal,ratio,millis\n"));
    }
}
