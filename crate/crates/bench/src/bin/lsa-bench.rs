use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuckoo_lsa::record::write_csv_to;
use cuckoo_lsa::{load_edge_list, solve_threshold, BipartiteGraph, RunRecord};
use lsa_bench::{
    match_caps, run_capacity, run_match, run_sweep_c, run_sweep_n, run_verify, Algo,
    CompletenessSuite, ExperimentConfig, LabelSuite, RunResult, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "lsa-bench",
    version,
    about = "Cuckoo allocation experiments with CSV output"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print k, xi* and the load threshold c*_k.
    Thresholds {
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6, 7, 8, 9, 10])]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Moves of local search and random walk as n grows.
    SweepN(SweepArgs),
    /// Moves as the density approaches the threshold at fixed n.
    SweepC(SweepArgs),
    /// Local search with location capacity s > 1.
    Capacity(SweepArgs),
    /// Move-capped matching against Hopcroft-Karp.
    Match(MatchArgs),
    /// Invariant suites; exits 1 on any violation.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Location counts, comma separated (1e5 style accepted).
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Densities m/n, comma separated.
    #[arg(long, value_delimiter = ',')]
    c: Vec<f64>,
    /// Fixed item count instead of a density.
    #[arg(long, value_parser = parse_count)]
    m: Option<usize>,
    /// Location capacity.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Algorithms: lsa, rw.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    distinct_choices: bool,
    /// Print every eviction chain to stderr.
    #[arg(long)]
    trace: bool,
    /// Per-insertion move cap of the random walk (default n).
    #[arg(long, value_parser = parse_count_u64)]
    rw_max_moves: Option<u64>,
    /// Allow densities at or above the threshold (small n only).
    #[arg(long)]
    above_threshold: bool,
}

#[derive(Args)]
struct MatchArgs {
    /// Edge-list file; a random left-regular graph is generated when absent.
    #[arg(long)]
    edge_list: Option<PathBuf>,
    #[arg(long)]
    one_based: bool,
    #[arg(long, value_delimiter = ',', value_parser = parse_count_u64)]
    caps: Option<Vec<u64>>,
    /// Right-side size of the generated graph.
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    n: usize,
    /// Left/right ratio of the generated graph.
    #[arg(long, default_value_t = 0.9)]
    c: f64,
    /// Left degree of the generated graph.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_count)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Density of the label-bound suite.
    #[arg(long)]
    c: Option<f64>,
    /// Item-count range `lo..hi` (inclusive) of the completeness suite.
    #[arg(long)]
    m: Option<String>,
    #[arg(long, default_value_t = 200)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
}

fn parse_count_u64(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Ok(f as u64)
    } else {
        Err(format!("`{s}` is not a whole count"))
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    parse_count_u64(s).map(|v| v as usize)
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((lo, hi)) => (parse_count(lo.trim())?, parse_count(hi.trim())?),
        None => {
            let v = parse_count(s.trim())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn experiment_config(
    a: &SweepArgs,
    default_s: usize,
    default_c: f64,
    default_n: usize,
) -> Result<ExperimentConfig, Failure> {
    let algos = if a.algo.is_empty() {
        vec![Algo::Lsa, Algo::RandomWalk]
    } else {
        a.algo
            .iter()
            .map(|s| {
                Algo::parse(s).ok_or_else(|| Failure::Usage(format!("unknown algorithm `{s}`")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(ExperimentConfig {
        ns: if a.n.is_empty() {
            vec![default_n]
        } else {
            a.n.clone()
        },
        k: a.k,
        cs: if a.c.is_empty() {
            vec![default_c]
        } else {
            a.c.clone()
        },
        m: a.m,
        s: a.s.unwrap_or(default_s),
        seeds: a.seeds,
        seed_base: a.seed_base,
        algos,
        distinct: a.distinct_choices,
        rw_max_moves: a.rw_max_moves,
        allow_above_threshold: a.above_threshold,
        trace: a.trace,
    })
}

fn emit(rows: &[RunRecord], out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => cuckoo_lsa::write_csv(rows, path)?,
        None => write_csv_to(io::stdout().lock(), rows)?,
    }
    Ok(())
}

fn emit_runs(runs: Vec<RunResult>, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut err = io::stderr().lock();
    for run in &runs {
        for line in &run.trace {
            writeln!(
                err,
                "[n={} seed={} {}] {line}",
                run.record.n, run.record.seed, run.record.algo
            )?;
        }
        if !run.valid {
            writeln!(
                err,
                "invalid allocation: n={} seed={} {}",
                run.record.n, run.record.seed, run.record.algo
            )?;
        }
    }
    let rows: Vec<RunRecord> = runs.into_iter().map(|r| r.record).collect();
    emit(&rows, out)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Thresholds { k, tol } => {
            let mut out = io::stdout().lock();
            writeln!(out, "k,xi_star,c_star")?;
            for k in k {
                let t = solve_threshold(k, tol)?;
                writeln!(out, "{},{:.12},{:.12}", t.k, t.xi_star, t.c_star)?;
            }
        }
        Command::SweepN(a) => {
            let cfg = experiment_config(&a, 1, 0.9, 100_000)?;
            emit_runs(run_sweep_n(&cfg)?, &a.out)?;
        }
        Command::SweepC(a) => {
            let mut cfg = experiment_config(&a, 1, 0.9, 100_000)?;
            if a.c.is_empty() {
                cfg.cs = vec![0.80, 0.85, 0.90, 0.915];
            }
            emit_runs(run_sweep_c(&cfg)?, &a.out)?;
        }
        Command::Capacity(a) => {
            let cfg = experiment_config(&a, 2, 1.7, 10_000)?;
            emit_runs(run_capacity(&cfg)?, &a.out)?;
        }
        Command::Match(a) => {
            let graph = match &a.edge_list {
                Some(path) => load_edge_list(path, a.one_based)?,
                None => {
                    if a.n == 0 || a.k == 0 || a.k > a.n || a.c.is_nan() || a.c < 0.0 {
                        return Err(Failure::Usage(
                            "generated graph needs n >= k >= 1 and c >= 0".into(),
                        ));
                    }
                    let left = cuckoo_lsa::instance::floor_items(a.c, a.n);
                    BipartiteGraph::random_left_regular(left, a.n, a.k, a.seed_base)
                }
            };
            let caps = match_caps(a.caps.as_deref(), graph.right_count());
            emit(&run_match(&graph, &caps, a.seed_base)?, &a.out)?;
        }
        Command::Verify(a) => {
            let n = a.n.unwrap_or(200);
            let labels = a.c.map(|c| LabelSuite {
                instances: a.seeds,
                n,
                k: a.k,
                c,
            });
            let completeness = match &a.m {
                Some(m) => {
                    let (m_min, m_max) = parse_range(m).map_err(Failure::Usage)?;
                    Some(CompletenessSuite {
                        instances: a.seeds,
                        n,
                        k: a.k,
                        m_min,
                        m_max,
                    })
                }
                None => None,
            };
            let report = run_verify(&VerifyConfig {
                labels,
                completeness,
                seed_base: a.seed_base,
            })?;
            print!("{report}");
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
