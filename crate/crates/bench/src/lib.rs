//! Experiment runners behind the `lsa-bench` binary.
//!
//! Every runner returns [`RunRecord`] rows in configuration order: sizes,
//! then densities, then repetitions, then algorithms. Repetitions run on a
//! rayon pool; each job owns its table and generator streams, so the rows do
//! not depend on scheduling. Only `wall_ns` differs between identical runs.

use std::fmt;
use std::time::Instant;

use cuckoo_lsa::rng::{repetition_seed, stream_rng, Stream};
use cuckoo_lsa::{
    feasible, hopcroft_karp, match_lsa, solve_threshold, AllocationTable, BipartiteGraph,
    InstanceError, InstanceSpec, Item, Outcome, RunRecord,
};
use rayon::prelude::*;
use thiserror::Error;

/// Largest `n` accepted for runs above the load threshold. Proving that no
/// allocation exists can take up to `n^2` moves.
pub const ABOVE_THRESHOLD_MAX_N: usize = 10_000;

/// Move caps of the matching sweep; [`run_match`] appends the right-side
/// size.
pub const DEFAULT_CAPS: [u64; 10] = [1, 2, 4, 5, 10, 50, 100, 1000, 10_000, 100_000];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("`{0}` needs at least one value")]
    EmptyRange(&'static str),
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("`{0}` takes a single value for this experiment")]
    NotFixed(&'static str),
    #[error("densities must be ascending")]
    NotAscending,
    #[error("density {c} is not below the threshold {c_star:.4} for k = {k}; pass the above-threshold flag")]
    AboveThreshold { c: f64, k: usize, c_star: f64 },
    #[error("above-threshold runs are limited to n <= {max}, got {n}")]
    TooLargeAboveThreshold { n: usize, max: usize },
    #[error("nothing to verify")]
    NothingToVerify,
    #[error("random-walk move cap must be at least 1")]
    ZeroMoveCap,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Threshold(#[from] cuckoo_lsa::ThresholdError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    /// Local search, unit capacity.
    Lsa,
    /// Random walk.
    RandomWalk,
    /// Local search with the capacity rule.
    LsaCapacity,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Lsa => "lsa",
            Algo::RandomWalk => "rw",
            Algo::LsaCapacity => "lsa_capacity",
        }
    }

    pub fn parse(s: &str) -> Option<Algo> {
        match s {
            "lsa" => Some(Algo::Lsa),
            "rw" | "random_walk" => Some(Algo::RandomWalk),
            "lsa_capacity" => Some(Algo::LsaCapacity),
            _ => None,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub k: usize,
    pub cs: Vec<f64>,
    /// Fixed item count; overrides `cs` when set.
    pub m: Option<usize>,
    pub s: usize,
    pub seeds: u64,
    pub seed_base: u64,
    pub algos: Vec<Algo>,
    pub distinct: bool,
    /// Per-insertion cap for the random walk; defaults to `n`.
    pub rw_max_moves: Option<u64>,
    pub allow_above_threshold: bool,
    pub trace: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ns: vec![100_000],
            k: 3,
            cs: vec![0.9],
            m: None,
            s: 1,
            seeds: 10,
            seed_base: 0,
            algos: vec![Algo::Lsa, Algo::RandomWalk],
            distinct: false,
            rw_max_moves: None,
            allow_above_threshold: false,
            trace: false,
        }
    }
}

impl ExperimentConfig {
    fn check_common(&self) -> Result<(), BenchError> {
        if self.ns.is_empty() {
            return Err(BenchError::EmptyRange("n"));
        }
        if self.cs.is_empty() && self.m.is_none() {
            return Err(BenchError::EmptyRange("c"));
        }
        if self.algos.is_empty() {
            return Err(BenchError::EmptyRange("algo"));
        }
        if self.seeds == 0 {
            return Err(BenchError::NoRepetitions);
        }
        if self.rw_max_moves == Some(0) {
            return Err(BenchError::ZeroMoveCap);
        }
        Ok(())
    }

    fn spec(&self, n: usize, c: f64, rep: u64) -> Result<InstanceSpec, BenchError> {
        let seed = repetition_seed(self.seed_base, rep);
        let spec = match self.m {
            Some(m) => InstanceSpec::with_items(n, self.k, m, seed)?,
            None => InstanceSpec::with_density(n, self.k, c, seed)?,
        };
        Ok(spec.capacity(self.s)?.distinct(self.distinct)?)
    }

    /// Every (instance, algorithm) job in row order.
    fn jobs(&self) -> Result<Vec<(InstanceSpec, Algo)>, BenchError> {
        let cs: Vec<f64> = match self.m {
            Some(_) => vec![f64::NAN],
            None => self.cs.clone(),
        };
        let mut jobs = Vec::new();
        for &n in &self.ns {
            for &c in &cs {
                for rep in 0..self.seeds {
                    let spec = self.spec(n, c, rep)?;
                    for &algo in &self.algos {
                        jobs.push((spec.clone(), algo));
                    }
                }
            }
        }
        Ok(jobs)
    }
}

/// A finished run with the checks that cannot be read off the CSV row.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub record: RunRecord,
    /// Table passed [`AllocationTable::validate`] at the end of the run.
    pub valid: bool,
    pub placed: usize,
    pub trace: Vec<String>,
}

/// Inserts the items of `spec` one by one until all are placed or an
/// insertion fails.
pub fn run_instance(
    spec: &InstanceSpec,
    algo: Algo,
    rw_max_moves: Option<u64>,
    trace: bool,
) -> RunResult {
    let start = Instant::now();
    let mut table =
        AllocationTable::with_seed(spec.n, spec.capacity, spec.seed).expect("spec was validated");
    table.set_tracing(trace);
    let mut walk = stream_rng(spec.seed, Stream::RandomWalk);
    let walk_cap = rw_max_moves.unwrap_or(spec.n as u64).max(1);
    let mut outcome = Outcome::Placed;
    let mut lines = Vec::new();

    for item in spec.items() {
        let id = item.id;
        let report = match algo {
            Algo::Lsa => table.insert_lsa(item),
            Algo::LsaCapacity => table.insert_lsa_capacity(item),
            Algo::RandomWalk => table.insert_random_walk(item, walk_cap, &mut walk),
        }
        .expect("generated items are valid for the table");
        if trace {
            lines.push(format!(
                "insert {id} {} moves={}",
                report.outcome, report.moves
            ));
            lines.extend(report.trace_lines().into_iter().map(|l| format!("  {l}")));
        }
        if !report.is_placed() {
            outcome = report.outcome;
            break;
        }
    }
    let wall_ns = start.elapsed().as_nanos() as u64;
    let stats = table.stats();

    RunResult {
        record: RunRecord {
            n: spec.n,
            k: spec.k,
            c: spec.c,
            s: spec.capacity,
            algo: algo.as_str().to_string(),
            seed: spec.seed,
            total_moves: stats.total_moves,
            max_moves: stats.max_moves,
            max_label: stats.max_label,
            label_sum: stats.label_sum,
            outcome: outcome.as_str().to_string(),
            wall_ns,
        },
        valid: table.validate().is_ok(),
        placed: table.placed_count(),
        trace: lines,
    }
}

fn run_jobs(config: &ExperimentConfig, jobs: Vec<(InstanceSpec, Algo)>) -> Vec<RunResult> {
    jobs.par_iter()
        .map(|(spec, algo)| run_instance(spec, *algo, config.rw_max_moves, config.trace))
        .collect()
}

/// Total and maximum moves as `n` grows at fixed `k` and density.
pub fn run_sweep_n(config: &ExperimentConfig) -> Result<Vec<RunResult>, BenchError> {
    config.check_common()?;
    if config.m.is_none() && config.cs.len() != 1 {
        return Err(BenchError::NotFixed("c"));
    }
    Ok(run_jobs(config, config.jobs()?))
}

/// Moves as the density approaches the threshold at fixed `n`.
pub fn run_sweep_c(config: &ExperimentConfig) -> Result<Vec<RunResult>, BenchError> {
    config.check_common()?;
    if config.ns.len() != 1 {
        return Err(BenchError::NotFixed("n"));
    }
    if config.cs.windows(2).any(|w| w[0] > w[1]) {
        return Err(BenchError::NotAscending);
    }
    if config.k >= 3 && config.s == 1 {
        let c_star = solve_threshold(config.k, 1e-12)?.c_star;
        if let Some(&c) = config.cs.iter().find(|&&c| c >= c_star) {
            if !config.allow_above_threshold {
                return Err(BenchError::AboveThreshold {
                    c,
                    k: config.k,
                    c_star,
                });
            }
            if config.ns[0] > ABOVE_THRESHOLD_MAX_N {
                return Err(BenchError::TooLargeAboveThreshold {
                    n: config.ns[0],
                    max: ABOVE_THRESHOLD_MAX_N,
                });
            }
        }
    }
    Ok(run_jobs(config, config.jobs()?))
}

/// Local search with location capacity `s`; `algos` is ignored.
pub fn run_capacity(config: &ExperimentConfig) -> Result<Vec<RunResult>, BenchError> {
    let config = ExperimentConfig {
        algos: vec![Algo::LsaCapacity],
        ..config.clone()
    };
    config.check_common()?;
    Ok(run_jobs(&config, config.jobs()?))
}

/// Sorted, de-duplicated caps with `right_count` appended.
pub fn match_caps(caps: Option<&[u64]>, right_count: usize) -> Vec<u64> {
    let mut caps: Vec<u64> = match caps {
        Some(c) => c.to_vec(),
        None => DEFAULT_CAPS
            .iter()
            .copied()
            .filter(|&c| c < right_count as u64)
            .chain([right_count as u64])
            .collect(),
    };
    caps.retain(|&c| c > 0);
    caps.sort_unstable();
    caps.dedup();
    caps
}

fn match_record(
    graph: &BipartiteGraph,
    algo: String,
    seed: u64,
    size: usize,
    stats: cuckoo_lsa::MoveStats,
    wall_ns: u64,
) -> RunRecord {
    RunRecord {
        n: graph.right_count(),
        k: graph.max_degree(),
        c: graph.left_count() as f64 / graph.right_count().max(1) as f64,
        s: 1,
        algo,
        seed,
        total_moves: stats.total_moves,
        max_moves: stats.max_moves,
        max_label: stats.max_label,
        label_sum: stats.label_sum,
        outcome: format!("matched={size}"),
        wall_ns,
    }
}

/// One row per move cap followed by a Hopcroft–Karp row.
pub fn run_match(
    graph: &BipartiteGraph,
    caps: &[u64],
    seed: u64,
) -> Result<Vec<RunRecord>, BenchError> {
    if caps.is_empty() {
        return Err(BenchError::EmptyRange("caps"));
    }
    let mut rows: Vec<RunRecord> = caps
        .par_iter()
        .map(|&cap| {
            let start = Instant::now();
            let r = match_lsa(graph, cap, seed);
            let wall = start.elapsed().as_nanos() as u64;
            match_record(graph, format!("lsa_cap={cap}"), seed, r.size, r.stats, wall)
        })
        .collect();
    let start = Instant::now();
    let hk = hopcroft_karp(graph);
    let wall = start.elapsed().as_nanos() as u64;
    rows.push(match_record(
        graph,
        "hopcroft_karp".into(),
        seed,
        hk.size,
        Default::default(),
        wall,
    ));
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelSuite {
    pub instances: u64,
    pub n: usize,
    pub k: usize,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessSuite {
    pub instances: u64,
    pub n: usize,
    pub k: usize,
    pub m_min: usize,
    pub m_max: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyConfig {
    pub labels: Option<LabelSuite>,
    pub completeness: Option<CompletenessSuite>,
    pub seed_base: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub violations: u64,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checks += 1;
        self.violations += u64::from(!ok);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    /// Label at most the BFS distance, per location after every insertion.
    pub label_bound: Tally,
    /// `total_moves <= label_sum <= n^2` per run.
    pub move_accounting: Tally,
    /// LSA success equals the matching oracle's verdict, per instance.
    pub feasibility: Tally,
    /// Table invariants at the end of every run.
    pub validity: Tally,
    /// Completeness instances the oracle judged feasible.
    pub feasible_instances: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        [
            self.label_bound,
            self.move_accounting,
            self.feasibility,
            self.validity,
        ]
        .iter()
        .all(|t| t.violations == 0)
    }

    fn merge(&mut self, other: &VerifyReport) {
        for (a, b) in [
            (&mut self.label_bound, other.label_bound),
            (&mut self.move_accounting, other.move_accounting),
            (&mut self.feasibility, other.feasibility),
            (&mut self.validity, other.validity),
        ] {
            a.checks += b.checks;
            a.violations += b.violations;
        }
        self.feasible_instances += other.feasible_instances;
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, t) in [
            ("label_bound", self.label_bound),
            ("move_accounting", self.move_accounting),
            ("feasibility", self.feasibility),
            ("validity", self.validity),
        ] {
            let verdict = if t.violations == 0 { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{verdict} {name}: {} checks, {} violations",
                t.checks, t.violations
            )?;
        }
        if self.feasibility.checks > 0 {
            writeln!(
                f,
                "INFO feasible instances: {} of {}",
                self.feasible_instances, self.feasibility.checks
            )?;
        }
        Ok(())
    }
}

fn check_accounting(report: &mut VerifyReport, table: &AllocationTable) {
    let s = table.stats();
    let n = table.n() as u64;
    report
        .move_accounting
        .record(s.total_moves <= s.label_sum && s.label_sum <= n * n);
}

fn verify_labels(suite: &LabelSuite, seed: u64) -> Result<VerifyReport, BenchError> {
    let spec = InstanceSpec::with_density(suite.n, suite.k, suite.c, seed)?;
    let mut report = VerifyReport::default();
    let mut table = AllocationTable::new(suite.n, 1).expect("n was validated");
    for item in spec.items() {
        let r = table.insert_lsa(item).expect("generated items are valid");
        let d = table.distances_to_free();
        for (label, dist) in table.labels().iter().zip(&d) {
            report.label_bound.record(label <= dist);
        }
        if !r.is_placed() {
            break;
        }
    }
    check_accounting(&mut report, &table);
    report.validity.record(table.validate().is_ok());
    Ok(report)
}

fn verify_completeness(
    suite: &CompletenessSuite,
    rep: u64,
    seed: u64,
) -> Result<VerifyReport, BenchError> {
    let span = (suite.m_max - suite.m_min + 1) as u64;
    let m = suite.m_min + (rep % span) as usize;
    let spec = InstanceSpec::with_items(suite.n, suite.k, m, seed)?;
    let items: Vec<Item> = spec.items().collect();
    let mut report = VerifyReport::default();
    let mut table = AllocationTable::new(suite.n, 1).expect("n was validated");
    let mut ok = true;
    for item in &items {
        if !table
            .insert_lsa(item.clone())
            .expect("generated items are valid")
            .is_placed()
        {
            ok = false;
            break;
        }
    }
    let truth = feasible(&items, suite.n, 1);
    report.feasibility.record(ok == truth);
    report.feasible_instances = u64::from(truth);
    check_accounting(&mut report, &table);
    report.validity.record(table.validate().is_ok());
    Ok(report)
}

/// Runs the configured invariant suites; a clean report has no violations.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport, BenchError> {
    if config.labels.is_none() && config.completeness.is_none() {
        return Err(BenchError::NothingToVerify);
    }
    let mut total = VerifyReport::default();
    if let Some(suite) = &config.labels {
        if suite.instances == 0 {
            return Err(BenchError::NoRepetitions);
        }
        let parts = (0..suite.instances)
            .into_par_iter()
            .map(|rep| verify_labels(suite, repetition_seed(config.seed_base, rep)))
            .collect::<Result<Vec<_>, _>>()?;
        parts.iter().for_each(|p| total.merge(p));
    }
    if let Some(suite) = &config.completeness {
        if suite.instances == 0 {
            return Err(BenchError::NoRepetitions);
        }
        if suite.m_min > suite.m_max {
            return Err(BenchError::EmptyRange("m"));
        }
        let parts = (0..suite.instances)
            .into_par_iter()
            .map(|rep| verify_completeness(suite, rep, repetition_seed(config.seed_base, rep)))
            .collect::<Result<Vec<_>, _>>()?;
        parts.iter().for_each(|p| total.merge(p));
    }
    Ok(total)
}
