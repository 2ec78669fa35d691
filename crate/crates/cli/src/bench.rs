//! SIR timing on Barabasi-Albert graphs. Graph construction is not timed.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use netdiff_core::engine::{child_seed, AttachedModel, Execution, ModelConfig, Topology};
use netdiff_core::graph::generators;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub reps: usize,
    /// Iterations after the initial status dump.
    pub iterations: usize,
    pub m: usize,
    pub execution: Execution,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1_000, 10_000, 100_000],
            seed: 1,
            reps: 5,
            iterations: 25,
            m: 3,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub nodes: usize,
    pub edges: usize,
    pub iterations: usize,
    pub reps: usize,
    pub median_s: f64,
    pub min_s: f64,
    pub max_s: f64,
}

pub fn sir_config() -> ModelConfig {
    ModelConfig::new().param("beta", 0.001).param("gamma", 0.01).param("percentage_infected", 0.05)
}

/// One timed run: initial sampling plus `iterations` steps past the status dump.
pub fn time_once(model: &AttachedModel, iterations: usize, seed: u64) -> Result<Duration, CliError> {
    let start = Instant::now();
    let mut state = model.initial_state(seed);
    model.iteration_bunch(&mut state, iterations + 1)?;
    Ok(start.elapsed())
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

pub fn bench_size(cfg: &BenchConfig, nodes: usize) -> Result<BenchRow, CliError> {
    let g = generators::barabasi_albert(nodes, cfg.m, cfg.seed)?;
    let edges = g.edge_count();
    let model =
        AttachedModel::attach(Arc::new(Topology::Static(g)), "SIR", sir_config())?.with_execution(cfg.execution);
    let times = (0..cfg.reps.max(1))
        .map(|r| time_once(&model, cfg.iterations, child_seed(cfg.seed, r as u64)).map(|d| d.as_secs_f64()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchRow {
        nodes,
        edges,
        iterations: cfg.iterations,
        reps: times.len(),
        median_s: median(times.clone()),
        min_s: times.iter().copied().fold(f64::INFINITY, f64::min),
        max_s: times.iter().copied().fold(0.0, f64::max),
    })
}

pub fn bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    cfg.sizes.iter().map(|&n| bench_size(cfg, n)).collect()
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut out = format!("{:>10} {:>10} {:>6} {:>5} {:>11} {:>11} {:>11}\n", "nodes", "edges", "iters", "reps", "median_s", "min_s", "max_s");
    for r in rows {
        writeln!(
            out,
            "{:>10} {:>10} {:>6} {:>5} {:>11.4} {:>11.4} {:>11.4}",
            r.nodes, r.edges, r.iterations, r.reps, r.median_s, r.min_s, r.max_s
        )
        .unwrap();
    }
    out
}
