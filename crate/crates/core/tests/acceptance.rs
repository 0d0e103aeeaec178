//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::hash_map::DefaultHasher;
use std::hash::Hasher;
use std::time::{Duration, Instant};

use bottleneck_core::dbst::{bucketize, forest_on_tree};
use bottleneck_core::gbst::{build_t2, select_nodes};
use bottleneck_core::harness::*;
use bottleneck_core::labeling::{konig_labeling, representatives, Labeling};
use bottleneck_core::oracle::*;
use bottleneck_core::pbst::{max_hops, partition_many, partition_three, partition_two};
use bottleneck_core::tours::cyclic_hop_gaps;
use bottleneck_core::tree::minimum_spanning_tree;
use bottleneck_core::*;
use rand::Rng;
use rayon::prelude::*;

const TOL: f64 = 1e-9;

/// Order-sensitive fingerprint of everything a criterion computed.
#[derive(Default)]
struct Digest(DefaultHasher);

impl Digest {
    fn f(&mut self, x: f64) {
        self.0.write_u64(x.to_bits());
    }
    fn u(&mut self, x: usize) {
        self.0.write_usize(x);
    }
    fn finish(&self) -> u64 {
        self.0.finish()
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    digest: u64,
}

fn euclid_or_metric(euclidean: bool, points: usize) -> Generator {
    if euclidean {
        Generator::Euclidean {
            dim: 2,
            n_points: points,
        }
    } else {
        Generator::RandomMetric { n: points }
    }
}

fn dbst_ratios() -> Outcome {
    let mut configs = Vec::new();
    for euclidean in [true, false] {
        for n in 2..=6 {
            configs.push((2, n, euclidean));
        }
        for n in 2..=4 {
            configs.push((3, n, euclidean));
        }
    }
    let mut digest = Digest::default();
    let mut worst = [0.0f64; 2];
    let mut count = 0;
    let mut pass = true;
    for &(k, n, euclidean) in &configs {
        let results: Vec<(f64, f64, bool, f64)> = (0..1000u64)
            .into_par_iter()
            .map(|seed| {
                let mut rng = seeded_rng(seed);
                let inst = euclid_or_metric(euclidean, k * n).generate(&mut rng).unwrap();
                let tuples = random_tuples(k * n, k, &mut rng).unwrap();
                let sol = solve_dbst(&inst, &tuples).unwrap();
                let (_, opt) = exact_dbst(&inst, &tuples).unwrap();
                (sol.bottleneck, opt, sol.shortcut, sol.mst_bottleneck)
            })
            .collect();
        for (achieved, opt, shortcut, mst) in results {
            count += 1;
            digest.f(achieved);
            digest.f(opt);
            let r = ratio(achieved, opt).unwrap_or(f64::INFINITY);
            worst[k - 2] = worst[k - 2].max(r);
            pass &= r <= (3 * k - 2) as f64 + TOL && r >= 1.0 - TOL;
            // For two trees without the shortcut, every feasible solution has a
            // tree crossing the longest spanning tree edge.
            pass &= k != 2 || shortcut || mst <= opt + TOL;
        }
    }
    Outcome {
        pass,
        detail: format!(
            "{count} instances, worst ratio k=2 {:.4} (bound 4), k=3 {:.4} (bound 7)",
            worst[0], worst[1]
        ),
        digest: digest.finish(),
    }
}

fn dbst_hops() -> Outcome {
    let results: Vec<(bool, usize, usize, u64)> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let k = rng.gen_range(2..=6);
            let n = rng.gen_range(1..=10_000 / k);
            let tree = random_tree(k * n, &mut rng);
            let root = rng.gen_range(0..k * n);
            let tree = tree.with_root(root).unwrap();
            let tuples = random_tuples(k * n, k, &mut rng).unwrap();
            let built = forest_on_tree(&tree, &tuples).unwrap();
            let index = TreeIndex::new(&tree);
            let hops = max_hops(&index, &built.forest.trees).unwrap();
            let mut diameter = 0;
            for b in &built.buckets.buckets {
                for (i, &x) in b.iter().enumerate() {
                    for &y in &b[i + 1..] {
                        diameter = diameter.max(index.hops(x, y).unwrap());
                    }
                }
            }
            let mut d = Digest::default();
            for t in &built.forest.trees {
                for &(a, b) in t.edges() {
                    d.u(a);
                    d.u(b);
                }
            }
            (hops <= 3 * k - 2 && diameter <= 2 * k - 2, k, tree.len(), d.finish())
        })
        .collect();
    let mut digest = Digest::default();
    let mut pass = true;
    let mut largest = 0;
    for (ok, _, size, d) in &results {
        pass &= *ok;
        largest = largest.max(*size);
        digest.u(*d as usize);
    }
    let mut spider = Vec::new();
    for k in [4, 5] {
        let tree = spider_tree(k).unwrap();
        let buckets = bucketize(&tree, k).unwrap();
        let index = TreeIndex::new(&tree);
        let diameter = buckets
            .buckets
            .iter()
            .flat_map(|b| b.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))))
            .map(|(x, y)| index.hops(x, y).unwrap())
            .max()
            .unwrap();
        pass &= diameter == 2 * k - 2;
        digest.u(diameter);
        spider.push(format!("spider({k}) diameter {diameter}"));
    }
    Outcome {
        pass,
        detail: format!("1000 trees up to {largest} nodes; {}", spider.join(", ")),
        digest: digest.finish(),
    }
}

fn gbst_ratios() -> Outcome {
    let results: Vec<(f64, f64)> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let points = rng.gen_range(2..=12);
            let inst = euclid_or_metric(seed % 2 == 0, points).generate(&mut rng).unwrap();
            let clusters = random_clusters(points, 0.2, &mut rng).unwrap();
            let sol = solve_2gbst(&inst, &clusters).unwrap();
            let (_, opt) = exact_gbst(&inst, &clusters).unwrap();
            (sol.bottleneck, opt)
        })
        .collect();
    let mut digest = Digest::default();
    let mut pass = true;
    let mut worst = 0.0f64;
    for (achieved, opt) in results {
        digest.f(achieved);
        digest.f(opt);
        let r = ratio(achieved, opt).unwrap_or(f64::INFINITY);
        worst = worst.max(r);
        pass &= (1.0 - TOL..=3.0 + TOL).contains(&r);
    }
    let (inst, clusters) = gbst_path8().unwrap();
    let (_, opt) = exact_gbst(&inst, &clusters).unwrap();
    let sol = solve_2gbst(&inst, &clusters).unwrap();
    let whole_path = sol.t1.len() == 8;
    let hop = max_hops(&TreeIndex::new(&sol.t1), std::slice::from_ref(&sol.tree)).unwrap();
    pass &= opt == 3.0 && whole_path && hop == 3;
    digest.f(opt);
    digest.u(hop);
    Outcome {
        pass,
        detail: format!("1000 instances, worst ratio {worst:.4} (bound 3); path fixture optimum {opt}, T1 spans it: {whole_path}, longest T2 edge {hop} hops"),
        digest: digest.finish(),
    }
}

fn gbst_hops() -> Outcome {
    let results: Vec<(bool, u64)> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let n = rng.gen_range(1..=300);
            let tree = random_tree(n, &mut rng);
            let root = rng.gen_range(0..n);
            let tree = tree.with_root(root).unwrap();
            let clusters = random_clusters(n, 0.2, &mut rng).unwrap();
            let selection = select_nodes(&tree, &clusters).unwrap();
            let one_each = clusters
                .clusters()
                .iter()
                .all(|c| c.iter().filter(|&&p| selection.is_selected(p)).count() == 1);
            // Tree::new inside build_t2 rejects disconnected or cyclic output.
            let (connected, hops, d) = match build_t2(&tree, &selection) {
                Ok(t2) => {
                    let hops = max_hops(&TreeIndex::new(&tree), std::slice::from_ref(&t2)).unwrap();
                    let mut d = Digest::default();
                    for &(a, b) in t2.edges() {
                        d.u(a);
                        d.u(b);
                    }
                    (t2.len() == clusters.len(), hops, d.finish())
                }
                Err(_) => (false, usize::MAX, 0),
            };
            (one_each && connected && hops <= 3, d)
        })
        .collect();
    let mut digest = Digest::default();
    let failures = results.iter().filter(|(ok, _)| !ok).count();
    for (_, d) in &results {
        digest.u(*d as usize);
    }
    Outcome {
        pass: failures == 0,
        detail: format!("10000 rooted trees, {failures} violations"),
        digest: digest.finish(),
    }
}

fn balanced_partitions() -> Outcome {
    let results: Vec<(bool, u64)> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let mut ok = true;
            let mut d = Digest::default();
            let n = rng.gen_range(2..=400);
            let tree = random_tree(n, &mut rng);
            let index = TreeIndex::new(&tree);
            let red = rng.gen_range(1..n);
            let (r, b) = partition_two(&tree, red).unwrap();
            ok &= r.len() == red && b.len() == n - red;
            ok &= max_hops(&index, &[r.clone(), b]).unwrap() <= 2;
            d.u(r.edges().len());

            let third = rng.gen_range(1..=130);
            let tree = random_tree(3 * third, &mut rng);
            let index = TreeIndex::new(&tree);
            let parts = partition_three(&tree).unwrap();
            ok &= parts.iter().all(|t| t.len() == third);
            ok &= max_hops(&index, &parts).unwrap() <= 2;
            for t in &parts {
                d.u(t.nodes()[0]);
            }

            let k = rng.gen_range(4..=8);
            let size = rng.gen_range(1..=50);
            let tree = random_tree(k * size, &mut rng);
            let index = TreeIndex::new(&tree);
            let forest = partition_many(&tree, k).unwrap();
            ok &= forest.len() == k && forest.trees.iter().all(|t| t.len() == size);
            ok &= max_hops(&index, &forest.trees).unwrap() <= 3;
            (ok, d.finish())
        })
        .collect();
    let mut digest = Digest::default();
    let mut pass = results.iter().all(|(ok, _)| *ok);
    for (_, d) in &results {
        digest.u(*d as usize);
    }
    let mut notes = Vec::new();
    for (m, k) in [(3, 2), (5, 3)] {
        let inst = Generator::FixtureStar { m }.generate(&mut seeded_rng(0)).unwrap();
        let (_, opt) = exact_pbst(&inst, k).unwrap();
        let star = star_tree(m);
        let forest = bottleneck_core::pbst::balanced_partition(&star, k).unwrap();
        let hops = max_hops(&TreeIndex::new(&star), &forest.trees).unwrap();
        pass &= opt == 2.0 && hops == 2;
        digest.f(opt);
        notes.push(format!("star({m}) optimum {opt}"));
    }
    let inst = Generator::FixtureSpider { k: 4 }.generate(&mut seeded_rng(0)).unwrap();
    let (_, opt) = exact_pbst(&inst, 4).unwrap();
    pass &= opt == 3.0;
    digest.f(opt);
    notes.push(format!("spider(4) optimum {opt}"));
    Outcome {
        pass,
        detail: format!("1000 trees per partition kind; {}", notes.join(", ")),
        digest: digest.finish(),
    }
}

fn pbst_ratios() -> Outcome {
    let results: Vec<(f64, f64, bool)> = (0..500u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let n = 3 + (seed % 3) as usize;
            let inst = euclid_or_metric(rng.gen_bool(0.5), 2 * n).generate(&mut rng).unwrap();
            let sol = solve_pbst(&inst, 2).unwrap();
            let (_, opt) = exact_pbst(&inst, 2).unwrap();
            let sound = sol.partitioned_bottlenecks.iter().all(|&b| b <= opt + TOL);
            (sol.bottleneck, opt, sound)
        })
        .collect();
    let mut digest = Digest::default();
    let mut pass = true;
    let mut worst = 0.0f64;
    for (achieved, opt, sound) in results {
        digest.f(achieved);
        digest.f(opt);
        let r = ratio(achieved, opt).unwrap_or(f64::INFINITY);
        worst = worst.max(r);
        pass &= sound && (1.0 - TOL..=2.0 + TOL).contains(&r);
    }
    let inst = Generator::FixtureSpider { k: 4 }.generate(&mut seeded_rng(0)).unwrap();
    let sol = solve_pbst(&inst, 4).unwrap();
    let (_, opt) = exact_pbst(&inst, 4).unwrap();
    let spider = sol.bottleneck / opt;
    pass &= spider <= 3.0 + TOL;
    digest.f(sol.bottleneck);
    Outcome {
        pass,
        detail: format!("500 instances, worst ratio {worst:.4} (bound 2); spider(4) ratio {spider:.4} (bound 3)"),
        digest: digest.finish(),
    }
}

fn tour_lifting() -> Outcome {
    // (gaps ok, lifted ratio, cross-oracle inequalities hold)
    let results: Vec<(bool, f64, bool, u64)> = (0..600u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let mut gaps_ok = true;
            let mut d = Digest::default();

            let n = rng.gen_range(3..=4);
            let inst = euclid_or_metric(seed % 2 == 0, 2 * n).generate(&mut rng).unwrap();
            let tuples = random_tuples(2 * n, 2, &mut rng).unwrap();
            let sol = solve_dbst(&inst, &tuples).unwrap();
            let (tours, achieved) = lift_to_tours(&sol.forest, &inst).unwrap();
            for (tree, tour) in sol.forest.trees.iter().zip(&tours.tours) {
                gaps_ok &= cyclic_hop_gaps(tree, tour).unwrap().iter().all(|&g| g <= 3);
            }
            let (_, tour_opt) = exact_dbst_tours(&inst, &tuples).unwrap();
            let (_, tree_opt) = exact_dbst(&inst, &tuples).unwrap();
            let mut cross = tree_opt <= tour_opt + TOL;
            d.f(achieved);
            d.f(tour_opt);

            // Larger forests from the other solvers.
            let size = rng.gen_range(3..=40);
            let big = euclid_or_metric(true, 3 * size).generate(&mut rng).unwrap();
            let forest = solve_pbst(&big, 3).unwrap().forest;
            let (lifted, _) = lift_to_tours(&forest, &big).unwrap();
            for (tree, tour) in forest.trees.iter().zip(&lifted.tours) {
                gaps_ok &= cyclic_hop_gaps(tree, tour).unwrap().iter().all(|&g| g <= 3);
            }

            // Single tour against single tree on a random subset.
            let m = rng.gen_range(3..=7);
            let subset: Vec<PointId> = rand::seq::index::sample(&mut rng, 3 * size, m).into_vec();
            let (_, tour) = exact_bottleneck_tour(&big, &subset).unwrap();
            let tree = minimum_spanning_tree(&big, &subset).unwrap().bottleneck(&big);
            cross &= tree <= tour + TOL;
            d.f(tour);

            (
                gaps_ok,
                ratio(achieved, tour_opt).unwrap_or(f64::INFINITY),
                cross,
                d.finish(),
            )
        })
        .collect();
    let mut digest = Digest::default();
    let mut pass = true;
    let mut worst = 0.0f64;
    for (gaps, r, cross, d) in results {
        pass &= gaps && cross && r <= 12.0 + TOL;
        worst = worst.max(r);
        digest.u(d as usize);
    }
    Outcome {
        pass,
        detail: format!("600 instances, worst lifted two-tour ratio {worst:.4} (bound 12)"),
        digest: digest.finish(),
    }
}

fn labeling() -> Outcome {
    let results: Vec<(bool, u64)> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded_rng(seed);
            let k = rng.gen_range(1..=5);
            let n = rng.gen_range(1..=50);
            let (a, b) = random_double_partition(k, n, &mut rng);
            let labels = konig_labeling(&a, &b, k).unwrap();
            let mut d = Digest::default();
            for (&p, &l) in labels.labels() {
                d.u(p);
                d.u(l);
            }
            (labels.validate(&a, &b).is_ok(), d.finish())
        })
        .collect();
    let mut digest = Digest::default();
    let mut pass = results.iter().all(|(ok, _)| *ok);
    for (_, d) in &results {
        digest.u(*d as usize);
    }

    let a = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9], vec![10, 11, 12]];
    let b = vec![vec![4, 9, 12], vec![2, 8, 11], vec![1, 3, 5], vec![6, 7, 10]];
    let reps = representatives(&a, &b).unwrap();
    let system_ok = reps
        .points
        .iter()
        .enumerate()
        .all(|(i, p)| a[i].contains(p) && b[reps.perm[i]].contains(p));
    let mut printed = std::collections::BTreeMap::new();
    for (l, class) in [[1, 6, 8, 12], [2, 5, 9, 10], [3, 4, 7, 11]].iter().enumerate() {
        for &p in class {
            printed.insert(p, l);
        }
    }
    let printed_ok = Labeling::from_map(3, printed).validate(&a, &b).is_ok();
    pass &= system_ok && printed_ok;
    for p in &reps.points {
        digest.u(*p);
    }
    Outcome {
        pass,
        detail: format!(
            "10000 double partitions; worked example system valid: {system_ok}, printed labeling valid: {printed_ok}"
        ),
        digest: digest.finish(),
    }
}

/// Result JSON and batch rows, with wall time masked.
fn pipeline_outputs() -> String {
    let mut out = String::new();
    let opts = RunOptions {
        k: None,
        exact: true,
        tours: true,
    };
    for (seed, g) in [
        (1, Generator::Euclidean { dim: 2, n_points: 8 }),
        (2, Generator::RandomMetric { n: 8 }),
    ] {
        let file = generate_file(&g, seed, Some(2), true).unwrap();
        for p in Problem::ALL {
            out.push_str(&serde_json::to_string(&run(p, &file, &opts).unwrap()).unwrap());
        }
    }
    let config = BatchConfig {
        generators: vec![
            Generator::Euclidean { dim: 3, n_points: 8 },
            Generator::FixtureGbstPath8,
        ],
        problems: Problem::ALL.to_vec(),
        seeds: (0..10).collect(),
        k: 2,
        exact: true,
    };
    let mut records = batch(&config).unwrap();
    for r in &mut records {
        r.millis = 0.0;
    }
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).unwrap();
    out.push_str(&String::from_utf8(buf).unwrap());
    out
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("k-DBST ratio", dbst_ratios, Duration::from_secs(120)),
        ("k-DBST hop invariant", dbst_hops, Duration::from_secs(60)),
        ("2-GBST ratio", gbst_ratios, Duration::from_secs(60)),
        ("2-GBST hop bound", gbst_hops, Duration::from_secs(60)),
        ("balanced partitioning", balanced_partitions, Duration::from_secs(120)),
        ("k-PBST ratio", pbst_ratios, Duration::from_secs(180)),
        ("tour lifting", tour_lifting, Duration::from_secs(120)),
        ("labeling", labeling, Duration::from_secs(30)),
    ];
    let mut all_pass = true;
    let mut digests = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *budget;
        all_pass &= pass;
        digests.push(outcome.digest);
        println!(
            "criterion {} ({name}): {} | {} | {:.1}s of {}s",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }

    let start = Instant::now();
    let rerun: Vec<u64> = criteria.iter().map(|(_, run, _)| run().digest).collect();
    let same_suites = rerun == digests;
    let same_outputs = pipeline_outputs() == pipeline_outputs();
    let pass = same_suites && same_outputs;
    all_pass &= pass;
    println!(
        "criterion 9 (determinism): {} | criteria 1-8 rerun identical: {same_suites}, run JSON and batch CSV identical: {same_outputs} | {:.1}s",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );

    if !all_pass {
        std::process::exit(1);
    }
}
