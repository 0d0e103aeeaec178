//! Command line front end: instance generation, the three solvers, exact
//! oracles and batch experiments.
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input, 1 when a
//! solver or oracle rejects the instance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bottleneck_core::harness::{self, BatchConfig, Generator, OracleProblem, Problem, RunOptions};
use bottleneck_core::{Error, InstanceFile};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bottleneck",
    version,
    about = "Bottleneck spanning trees and tours in metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// k disjoint trees, each taking one point of every tuple.
    Dbst(SolveArgs),
    /// One tree through a representative of every cluster (clusters of at most 2).
    Gbst(SolveArgs),
    /// k trees of equal size covering all points.
    Pbst(SolveArgs),
    /// Exact optimum of a small instance.
    Oracle(OracleArgs),
    /// Run a batch of experiments described by a JSON config and write CSV.
    Batch(BatchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Add random tuples of this size (and record it as k).
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Add a random clustering into singletons and pairs.
    #[arg(long, global = true)]
    clusters: bool,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Uniform points in the unit cube.
    Euclidean {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        points: usize,
    },
    /// Shortest-path closure of random weights.
    RandomMetric {
        #[arg(long)]
        points: usize,
    },
    /// Eight points on a unit line with five clusters; optimum 3.
    FixtureGbstPath8,
    /// Star path metric.
    FixtureStar {
        #[arg(long)]
        leaves: usize,
    },
    /// Spider path metric on size^2 points.
    FixtureSpider {
        #[arg(long)]
        size: usize,
    },
}

impl GenKind {
    fn generator(&self) -> Generator {
        match *self {
            GenKind::Euclidean { dim, points } => Generator::Euclidean { dim, n_points: points },
            GenKind::RandomMetric { points } => Generator::RandomMetric { n: points },
            GenKind::FixtureGbstPath8 => Generator::FixtureGbstPath8,
            GenKind::FixtureStar { leaves } => Generator::FixtureStar { m: leaves },
            GenKind::FixtureSpider { size } => Generator::FixtureSpider { k: size },
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Number of trees; must agree with the file when both are given.
    #[arg(long)]
    k: Option<usize>,
    /// Also compute the exact optimum and the ratio.
    #[arg(long)]
    exact: bool,
    /// Also lift the trees to tours.
    #[arg(long)]
    tours: bool,
}

impl SolveArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            k: self.k,
            exact: self.exact,
            tours: self.tours,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Dbst,
    Gbst,
    Pbst,
    Tour,
}

#[derive(Args)]
struct OracleArgs {
    problem: OracleKind,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// For dbst, also compute the optimal disjoint tours.
    #[arg(long)]
    tours: bool,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run only this seed instead of the config's list.
    #[arg(long)]
    seed: Option<u64>,
}

/// Input problems exit with 2, everything else with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Io(_) | Error::Json(_) | Error::InvalidMetric(_) | Error::PointOutOfRange { .. }) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn read_instance(path: &Path) -> anyhow::Result<InstanceFile> {
    InstanceFile::read(path).with_context(|| format!("cannot read instance {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(Error::from)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(Error::from)?;
            Ok(())
        }
    }
}

fn json_text(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn solve(problem: Problem, args: &SolveArgs) -> anyhow::Result<()> {
    let file = read_instance(&args.input)?;
    let result = harness::run(problem, &file, &args.options())?;
    emit(args.output.as_deref(), &json_text(&result))
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(args) => {
            let file = harness::generate_file(&args.kind.generator(), args.seed, args.k, args.clusters)?;
            let mut text = file.to_json();
            text.push('\n');
            emit(args.output.as_deref(), &text)
        }
        Command::Dbst(args) => solve(Problem::Dbst, &args),
        Command::Gbst(args) => solve(Problem::Gbst, &args),
        Command::Pbst(args) => solve(Problem::Pbst, &args),
        Command::Oracle(args) => {
            let file = read_instance(&args.input)?;
            let problem = match args.problem {
                OracleKind::Dbst => OracleProblem::Dbst,
                OracleKind::Gbst => OracleProblem::Gbst,
                OracleKind::Pbst => OracleProblem::Pbst,
                OracleKind::Tour => OracleProblem::Tour,
            };
            let opts = RunOptions {
                k: args.k,
                exact: true,
                tours: args.tours,
            };
            let result = harness::run_oracle(problem, &file, &opts)?;
            emit(args.output.as_deref(), &json_text(&result))
        }
        Command::Batch(args) => {
            let text = fs::read_to_string(&args.input)
                .map_err(Error::from)
                .with_context(|| format!("cannot read config {}", args.input.display()))?;
            let mut config: BatchConfig = serde_json::from_str(&text)
                .map_err(Error::from)
                .with_context(|| format!("malformed config {}", args.input.display()))?;
            if let Some(seed) = args.seed {
                config.seeds = vec![seed];
            }
            let records = harness::batch(&config)?;
            let mut buf = Vec::new();
            harness::write_csv(&records, &mut buf)?;
            emit(args.output.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))
        }
    }
}

/// The context chain, skipping causes already quoted by the message above them.
fn describe(err: &anyhow::Error) -> String {
    let mut text = String::new();
    for cause in err.chain() {
        let msg = cause.to_string();
        if !text.contains(&msg) {
            if !text.is_empty() {
                text.push_str(": ");
            }
            text.push_str(&msg);
        }
    }
    text
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", describe(&err));
            ExitCode::from(exit_code(&err))
        }
    }
}
