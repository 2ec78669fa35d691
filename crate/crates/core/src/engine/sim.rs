use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::index;

use super::config::{self, ResolvedInitial};
use super::delta::{IterationDelta, Trajectory, TrajectoryMeta};
use super::rng::{self, INIT_STREAM};
use super::{ExecutionMode, ModelConfig, Topology};
use crate::graph::{Graph, NodeId};
use crate::models::{registry, ModelDefinition, ModelMeta, Rule, Schedule, Status, StepContext};
use crate::{par, Error, Result};

/// Node loops shorter than this never split into chunks.
const PAR_MIN_NODES: usize = 32_768;
const CHUNK: usize = 8_192;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Chunked node loops for large graphs and concurrent runs in [`multi_runs`].
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    fn parallel(self) -> bool {
        self == Execution::Parallel && par::available()
    }
}

/// Mutable state of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationState {
    pub statuses: Vec<Status>,
    /// Iterations already emitted; the next call produces this index.
    pub iteration: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
}

/// A model bound to a topology with a validated configuration. Immutable and
/// shareable; every run keeps its own [`SimulationState`].
pub struct AttachedModel {
    topology: Arc<Topology>,
    meta: ModelMeta,
    rule: Box<dyn Rule>,
    config: ModelConfig,
    initial: ResolvedInitial,
    mode: Option<ExecutionMode>,
    start_time: i64,
    execution: Execution,
}

impl std::fmt::Debug for AttachedModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AttachedModel")
            .field("model", &self.meta.name)
            .field("config", &self.config)
            .field("mode", &self.mode)
            .finish()
    }
}

impl AttachedModel {
    /// Looks `name` up in the registry and validates `config` against it.
    pub fn attach(topology: Arc<Topology>, name: &str, config: ModelConfig) -> Result<Self> {
        let def = registry::get(name).ok_or_else(|| Error::UnknownModel(name.to_owned()))?;
        Self::attach_custom(topology, def, config)
    }

    pub fn attach_custom(topology: Arc<Topology>, def: &dyn ModelDefinition, config: ModelConfig) -> Result<Self> {
        let meta = *def.meta();
        let (params, initial, mode) = config::resolve(&meta, &topology, &config)?;
        let rule = def.build(&topology, &params)?;
        let start_time = match (&*topology, mode) {
            (Topology::Temporal(t), Some(ExecutionMode::Interactions)) => {
                config.start_time.or(t.first_timestamp()).unwrap_or(0)
            }
            _ => 0,
        };
        Ok(AttachedModel { topology, meta, rule, config, initial, mode, start_time, execution: Execution::default() })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn name(&self) -> &'static str {
        self.meta.name
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn topology(&self) -> &Arc<Topology> {
        &self.topology
    }

    pub fn execution_mode(&self) -> Option<ExecutionMode> {
        self.mode
    }

    /// Number of iterations (including iteration 0) available before the topology runs out.
    pub fn horizon(&self) -> Option<u64> {
        match (&*self.topology, self.mode) {
            (Topology::Snapshots(s), _) => Some(s.len() as u64 + 1),
            (Topology::Temporal(t), Some(ExecutionMode::Snapshots)) => Some(t.graph().timestamps().len() as u64 + 1),
            (Topology::Temporal(t), _) => match t.last_timestamp() {
                Some(last) => Some((last - self.start_time + 2).max(1) as u64),
                None => Some(1),
            },
            (Topology::Static(_), _) => None,
        }
    }

    pub fn time_unit(&self) -> &'static str {
        match self.mode {
            Some(ExecutionMode::Snapshots) => "snapshot",
            Some(ExecutionMode::Interactions) => "timestamp",
            None if self.meta.micro && self.config.sweep => "sweep",
            None if self.meta.micro => "micro_update",
            None => "iteration",
        }
    }

    /// Samples initial statuses for a run keyed by `seed`.
    pub fn initial_state(&self, seed: u64) -> SimulationState {
        self.build_state(seed, None)
    }

    /// Initial state with `planted` nodes set to the seed status instead of the configured assignment.
    pub fn initial_state_planted(&self, seed: u64, planted: &[NodeId]) -> Result<SimulationState> {
        let n = self.topology.node_count();
        if let Some(&bad) = planted.iter().find(|&&v| v as usize >= n) {
            return Err(Error::config("infected_nodes", format!("node {bad} out of range (|V| = {n})")));
        }
        Ok(self.build_state(seed, Some(planted)))
    }

    fn build_state(&self, seed: u64, planted: Option<&[NodeId]>) -> SimulationState {
        let n = self.topology.node_count();
        let mut statuses = vec![ModelMeta::BASE; n];
        let mut rng = rng::stream(seed, INIT_STREAM);
        match (planted, &self.initial) {
            (Some(nodes), _) => {
                let seed_status = self.meta.seed_status.unwrap_or(1);
                for &v in nodes {
                    statuses[v as usize] = seed_status;
                }
            }
            (None, ResolvedInitial::Planted(assign)) => {
                for &(v, s) in assign {
                    statuses[v as usize] = s;
                }
            }
            (None, ResolvedInitial::Fraction(fractions)) => {
                let mut pool = self.initial_pool();
                let size = pool.len();
                for &(status, f) in fractions {
                    let mut k = (f * size as f64).floor() as usize;
                    if f > 0.0 && k == 0 {
                        k = 1;
                    }
                    let k = k.min(pool.len());
                    let mut picked = index::sample(&mut rng, pool.len(), k).into_vec();
                    picked.sort_unstable_by(|a, b| b.cmp(a));
                    for i in picked {
                        statuses[pool.swap_remove(i) as usize] = status;
                    }
                }
            }
        }
        self.rule.prepare_initial(&mut statuses, &mut rng);
        let mut counts = vec![0u64; self.meta.statuses.len()];
        for &s in &statuses {
            counts[s as usize] += 1;
        }
        SimulationState { statuses, iteration: 0, seed, counts }
    }

    /// Nodes eligible for fraction sampling. On dynamic topologies only nodes
    /// present in the first frame qualify, so later arrivals enter susceptible.
    fn initial_pool(&self) -> Vec<NodeId> {
        let n = self.topology.node_count() as NodeId;
        match (&*self.topology, self.mode) {
            (Topology::Static(_), _) => (0..n).collect(),
            (Topology::Snapshots(seq), _) => match seq.get(0) {
                Some(first) => (0..n).filter(|&v| first.present[v as usize]).collect(),
                None => Vec::new(),
            },
            (Topology::Temporal(t), mode) => {
                let start = match mode {
                    Some(ExecutionMode::Interactions) => Some(self.start_time),
                    _ => t.first_timestamp(),
                };
                match start {
                    Some(t0) => (0..n).filter(|&v| t.graph().node_present(v, t0)).collect(),
                    None => Vec::new(),
                }
            }
        }
    }

    fn count_map(&self, state: &SimulationState) -> BTreeMap<Status, u64> {
        state.counts.iter().enumerate().map(|(s, &c)| (s as Status, c)).collect()
    }

    /// Graph, presence mask and time label for iteration `i >= 1`.
    fn frame(&self, i: u64) -> Result<Frame<'_>> {
        match (&*self.topology, self.mode) {
            (Topology::Static(g), _) => Ok((g, None, None)),
            (Topology::Snapshots(seq), _) => {
                let snap = seq.get((i - 1) as usize).ok_or_else(|| {
                    Error::Simulation(format!("iteration {i} is past the last of {} snapshots", seq.len()))
                })?;
                Ok((&snap.graph, Some(&snap.present), Some(snap.id)))
            }
            (Topology::Temporal(t), Some(ExecutionMode::Snapshots)) => {
                // Snapshot mode over a temporal graph walks its observed timestamps.
                let ts = t.graph().timestamps();
                let time = *ts.iter().nth((i - 1) as usize).ok_or_else(|| {
                    Error::Simulation(format!("iteration {i} is past the last of {} timestamps", ts.len()))
                })?;
                Ok((t.slice_at(time), None, Some(time)))
            }
            (Topology::Temporal(t), _) => {
                let time = self.start_time + (i - 1) as i64;
                match t.last_timestamp() {
                    Some(last) if time <= last => Ok((t.slice_at(time), None, Some(time))),
                    _ => Err(Error::Simulation(format!("timestamp {time} is past the end of the temporal network"))),
                }
            }
        }
    }

    /// Advances `state` by one iteration. Iteration 0 reports every node's status.
    pub fn iteration(&self, state: &mut SimulationState) -> Result<IterationDelta> {
        self.step(state, self.execution.parallel())
    }

    /// `n` consecutive calls to [`iteration`](Self::iteration); iteration 0 counts towards `n`.
    pub fn iteration_bunch(&self, state: &mut SimulationState, n: usize) -> Result<Vec<IterationDelta>> {
        (0..n).map(|_| self.iteration(state)).collect()
    }

    fn step(&self, state: &mut SimulationState, parallel: bool) -> Result<IterationDelta> {
        let i = state.iteration;
        if i == 0 {
            state.iteration = 1;
            return Ok(IterationDelta {
                iteration: 0,
                changed: state.statuses.iter().enumerate().map(|(v, &s)| (v as NodeId, s)).collect(),
                node_count: self.count_map(state),
                status_delta: (0..self.meta.statuses.len()).map(|s| (s as Status, 0)).collect(),
                time: None,
            });
        }
        let (graph, present, time) = self.frame(i)?;
        let changed = match self.rule.schedule() {
            Schedule::Synchronous { stochastic } => synchronous(&*self.rule, graph, present, state, stochastic, parallel),
            Schedule::Micro => {
                let reps = if self.config.sweep { graph.node_count() } else { 1 };
                micro(&*self.rule, graph, state, reps)
            }
        };
        let mut status_delta: BTreeMap<Status, i64> = (0..self.meta.statuses.len()).map(|s| (s as Status, 0)).collect();
        for &(v, new) in &changed {
            let old = state.statuses[v as usize];
            state.statuses[v as usize] = new;
            state.counts[old as usize] -= 1;
            state.counts[new as usize] += 1;
            *status_delta.get_mut(&old).expect("declared status") -= 1;
            *status_delta.get_mut(&new).expect("declared status") += 1;
        }
        state.iteration += 1;
        Ok(IterationDelta { iteration: i, changed, node_count: self.count_map(state), status_delta, time })
    }

    fn meta_for(&self, seed: u64) -> TrajectoryMeta {
        TrajectoryMeta {
            model: self.meta.name.to_owned(),
            params: ModelConfig { seed: Some(seed), ..self.config.clone() },
            seed,
            graph_digest: self.topology.digest(),
            statuses: self.meta.statuses.iter().map(|s| s.to_string()).collect(),
            time_unit: self.time_unit().to_owned(),
        }
    }
}

/// Evaluates every node against the frozen statuses and returns the changes
/// sorted by node id. Absent nodes keep their status but still own a draw.
fn synchronous(
    rule: &dyn Rule,
    graph: &Graph,
    present: Option<&[bool]>,
    state: &SimulationState,
    stochastic: bool,
    parallel: bool,
) -> Vec<(NodeId, Status)> {
    let n = state.statuses.len();
    let ctx = StepContext { graph, statuses: &state.statuses };
    let run = |start: usize, end: usize| {
        let mut uniforms = vec![0.0; if stochastic { end - start } else { 0 }];
        if stochastic {
            rng::node_uniforms(state.seed, state.iteration, start, &mut uniforms);
        }
        let mut out = Vec::new();
        for v in start..end {
            if present.is_some_and(|p| !p[v]) {
                continue;
            }
            let u = if stochastic { uniforms[v - start] } else { 0.0 };
            if let Some(s) = rule.node_update(&ctx, v as NodeId, u) {
                if s != state.statuses[v] {
                    out.push((v as NodeId, s));
                }
            }
        }
        out
    };
    if parallel && n >= PAR_MIN_NODES {
        let chunks = n.div_ceil(CHUNK);
        par::map_range(chunks, true, |c| run(c * CHUNK, ((c + 1) * CHUNK).min(n))).concat()
    } else {
        run(0, n)
    }
}

/// `reps` asynchronous micro-updates; returns the net changes sorted by node id.
fn micro(rule: &dyn Rule, graph: &Graph, state: &SimulationState, reps: usize) -> Vec<(NodeId, Status)> {
    let mut rng = rng::stream(state.seed, state.iteration);
    let mut working = state.statuses.clone();
    let mut original: HashMap<NodeId, Status> = HashMap::new();
    let mut buf = Vec::new();
    for _ in 0..reps {
        buf.clear();
        rule.micro_update(graph, &working, &mut rng, &mut buf);
        for &(v, s) in &buf {
            original.entry(v).or_insert(working[v as usize]);
            working[v as usize] = s;
        }
    }
    let mut changed: Vec<(NodeId, Status)> =
        original.into_iter().filter(|&(v, s)| working[v as usize] != s).map(|(v, _)| (v, working[v as usize])).collect();
    changed.sort_unstable_by_key(|&(v, _)| v);
    changed
}

/// Graph, presence mask and time label of one iteration.
type Frame<'a> = (&'a Graph, Option<&'a [bool]>, Option<i64>);

/// Convenience wrapper owning one run and its history.
#[derive(Debug)]
pub struct Simulation {
    model: AttachedModel,
    state: SimulationState,
    history: Vec<IterationDelta>,
}

impl Simulation {
    /// Attaches `name` and samples the initial state. `seed` overrides nothing
    /// if the config carries its own seed.
    pub fn new(topology: Arc<Topology>, name: &str, config: ModelConfig, seed: u64) -> Result<Self> {
        let model = AttachedModel::attach(topology, name, config)?;
        Ok(Self::from_model(model, seed))
    }

    pub fn from_model(model: AttachedModel, seed: u64) -> Self {
        let seed = model.config.seed.unwrap_or(seed);
        let state = model.initial_state(seed);
        Simulation { model, state, history: Vec::new() }
    }

    pub fn model(&self) -> &AttachedModel {
        &self.model
    }

    pub fn state(&self) -> &SimulationState {
        &self.state
    }

    pub fn seed(&self) -> u64 {
        self.state.seed
    }

    pub fn statuses(&self) -> &[Status] {
        &self.state.statuses
    }

    pub fn history(&self) -> &[IterationDelta] {
        &self.history
    }

    pub fn iteration(&mut self) -> Result<IterationDelta> {
        let delta = self.model.iteration(&mut self.state)?;
        self.history.push(delta.clone());
        Ok(delta)
    }

    pub fn iteration_bunch(&mut self, n: usize) -> Result<Vec<IterationDelta>> {
        (0..n).map(|_| self.iteration()).collect()
    }

    /// Back to the initial state of the same seed; history is discarded.
    pub fn reset(&mut self) {
        self.state = self.model.initial_state(self.state.seed);
        self.history.clear();
    }

    pub fn destroy(self) {}

    pub fn trajectory(&self) -> Trajectory {
        Trajectory { meta: self.model.meta_for(self.state.seed), iterations: self.history.clone() }
    }
}

/// Runs `executions` independent simulations of `iterations` iterations each.
///
/// Run `r` is seeded with [`child_seed`](super::child_seed)`(seed, r)`; with
/// `infected_sets`, run `r` starts from `infected_sets[r]` in the seed status.
/// Runs execute concurrently when the model's execution is parallel, and the
/// output is identical either way.
pub fn multi_runs(
    model: &AttachedModel,
    iterations: usize,
    executions: usize,
    infected_sets: Option<&[Vec<NodeId>]>,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    if let Some(sets) = infected_sets {
        if sets.len() != executions {
            return Err(Error::config(
                "infected_sets",
                format!("{} sets given for {executions} executions", sets.len()),
            ));
        }
    }
    let concurrent = model.execution.parallel();
    par::map_range(executions, concurrent, |r| {
        let run_seed = rng::child_seed(seed, r as u64);
        let mut state = match infected_sets {
            Some(sets) => model.initial_state_planted(run_seed, &sets[r])?,
            None => model.initial_state(run_seed),
        };
        // Runs already saturate the pool; keep each node loop sequential.
        let iterations = (0..iterations).map(|_| model.step(&mut state, false)).collect::<Result<_>>()?;
        Ok(Trajectory { meta: model.meta_for(run_seed), iterations })
    })
    .into_iter()
    .collect()
}
