use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Topology;
use crate::graph::{Graph, NodeId};
use crate::models::{ModelMeta, ParamScope, ParamSpec, ResolvedParams, Status, TopologyKind};
use crate::{Error, Result};

/// Shorthand accepted in `model_params`: initial fraction of the model's seed status.
pub const PERCENTAGE_INFECTED: &str = "percentage_infected";

/// Edge key `(u, v)`, written as `"u,v"` in JSON maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub NodeId, pub NodeId);

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

impl FromStr for EdgeKey {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("edge key `{s}` is not `u,v`"))?;
        let parse = |t: &str| t.trim().parse::<NodeId>().map_err(|_| format!("edge key `{s}` has a bad node id"));
        Ok(EdgeKey(parse(a)?, parse(b)?))
    }
}

impl Serialize for EdgeKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStatus {
    /// Status name -> fraction of nodes sampled into it.
    Fraction(BTreeMap<String, f64>),
    /// Node id -> status name; unlisted nodes take the base status.
    Planted(BTreeMap<NodeId, String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecutionMode {
    Snapshots,
    Interactions,
}

/// Everything needed to configure one model run, independent of the topology.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub model_params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub node_params: BTreeMap<String, BTreeMap<NodeId, f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_params: BTreeMap<String, BTreeMap<EdgeKey, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Dynamic models only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub execution_mode: Option<ExecutionMode>,
    /// Interaction mode: timestamp processed by iteration 1 (default: first observed timestamp).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_time: Option<i64>,
    /// Opinion models: one iteration performs `|V|` micro-updates instead of one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub sweep: bool,
}

impl ModelConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.model_params.insert(name.to_owned(), value);
        self
    }

    pub fn node_param(mut self, name: &str, node: NodeId, value: f64) -> Self {
        self.node_params.entry(name.to_owned()).or_default().insert(node, value);
        self
    }

    pub fn edge_param(mut self, name: &str, u: NodeId, v: NodeId, value: f64) -> Self {
        self.edge_params.entry(name.to_owned()).or_default().insert(EdgeKey(u, v), value);
        self
    }

    pub fn fraction(mut self, status: &str, fraction: f64) -> Self {
        match &mut self.initial {
            Some(InitialStatus::Fraction(map)) => {
                map.insert(status.to_owned(), fraction);
            }
            _ => self.initial = Some(InitialStatus::Fraction(BTreeMap::from([(status.to_owned(), fraction)]))),
        }
        self
    }

    pub fn planted<'a>(mut self, assignments: impl IntoIterator<Item = (NodeId, &'a str)>) -> Self {
        self.initial =
            Some(InitialStatus::Planted(assignments.into_iter().map(|(v, s)| (v, s.to_owned())).collect()));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_mode(mut self, mode: ExecutionMode) -> Self {
        self.execution_mode = Some(mode);
        self
    }
}

/// Initial assignment after validation, expressed in status codes.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum ResolvedInitial {
    /// `(status, fraction)` in status declaration order.
    Fraction(Vec<(Status, f64)>),
    Planted(Vec<(NodeId, Status)>),
}

fn check_range(field: &str, spec: &ParamSpec, value: f64) -> Result<()> {
    if !value.is_finite() || value < spec.min || value > spec.max {
        return Err(Error::config(field, format!("{value} is outside [{}, {}]", spec.min, spec.max)));
    }
    if spec.integer && value.fract() != 0.0 {
        return Err(Error::config(field, format!("{value} is not an integer")));
    }
    Ok(())
}

/// Checks `cfg` against `meta` and the topology, producing defaulted parameter arrays.
pub(crate) fn resolve(
    meta: &ModelMeta,
    topology: &Topology,
    cfg: &ModelConfig,
) -> Result<(ResolvedParams, ResolvedInitial, Option<ExecutionMode>)> {
    let n = topology.node_count();
    let static_graph = topology.static_graph();

    for name in cfg.model_params.keys() {
        if name != PERCENTAGE_INFECTED && meta.param(name).is_none() {
            return Err(Error::config(
                format!("model_params.{name}"),
                format!("unknown parameter for model {}", meta.name),
            ));
        }
    }

    let mut resolved = ResolvedParams { node_count: n, ..Default::default() };
    for spec in meta.params {
        let field = format!("model_params.{}", spec.name);
        let global = cfg.model_params.get(spec.name).copied().or(spec.default);
        if let Some(v) = global {
            check_range(&field, spec, v)?;
        }
        match spec.scope {
            ParamScope::Model => {
                let v = global.ok_or_else(|| Error::config(&field, "required parameter is missing"))?;
                resolved.model.insert(spec.name.to_owned(), v);
            }
            ParamScope::Node => {
                let overrides = cfg.node_params.get(spec.name);
                let mut values = vec![global.unwrap_or(f64::NAN); n];
                if let Some(map) = overrides {
                    for (&node, &v) in map {
                        let nfield = format!("node_params.{}.{node}", spec.name);
                        if node as usize >= n {
                            return Err(Error::config(nfield, format!("node id out of range (|V| = {n})")));
                        }
                        check_range(&nfield, spec, v)?;
                        values[node as usize] = v;
                    }
                }
                if let Some(missing) = values.iter().position(|v| v.is_nan()) {
                    return Err(Error::config(
                        &field,
                        format!("no value for node {missing}; set a global value or cover every node"),
                    ));
                }
                resolved.node.insert(spec.name.to_owned(), values);
            }
            ParamScope::Edge => {
                let graph = static_graph.ok_or_else(|| {
                    Error::config(&field, "edge parameters require a static topology")
                })?;
                let values = resolve_edge_param(spec, graph, global, cfg.edge_params.get(spec.name))?;
                resolved.edge.insert(spec.name.to_owned(), values);
            }
        }
    }
    for name in cfg.node_params.keys() {
        if meta.param(name).map(|p| p.scope) != Some(ParamScope::Node) {
            return Err(Error::config(format!("node_params.{name}"), format!("not a node parameter of {}", meta.name)));
        }
    }
    for name in cfg.edge_params.keys() {
        if meta.param(name).map(|p| p.scope) != Some(ParamScope::Edge) {
            return Err(Error::config(format!("edge_params.{name}"), format!("not an edge parameter of {}", meta.name)));
        }
    }

    let initial = resolve_initial(meta, n, cfg)?;

    let mode = match (meta.topology, topology) {
        (TopologyKind::Static, Topology::Static(_)) => {
            if cfg.execution_mode.is_some() {
                return Err(Error::config("execution_mode", "only dynamic models take an execution mode"));
            }
            None
        }
        (TopologyKind::Static, _) => {
            return Err(Error::config("network", format!("{} requires a static network", meta.name)))
        }
        (TopologyKind::Dynamic, Topology::Static(_)) => {
            return Err(Error::config("network", format!("{} requires a snapshot or temporal network", meta.name)))
        }
        (TopologyKind::Dynamic, Topology::Snapshots(_)) => match cfg.execution_mode {
            None | Some(ExecutionMode::Snapshots) => Some(ExecutionMode::Snapshots),
            Some(ExecutionMode::Interactions) => {
                return Err(Error::config("execution_mode", "interactions mode requires a temporal network"))
            }
        },
        (TopologyKind::Dynamic, Topology::Temporal(_)) => Some(cfg.execution_mode.unwrap_or(ExecutionMode::Interactions)),
    };
    if cfg.start_time.is_some() && mode != Some(ExecutionMode::Interactions) {
        return Err(Error::config("start_time", "only meaningful in interactions mode"));
    }
    if cfg.sweep && !meta.micro {
        return Err(Error::config("sweep", format!("{} is not a micro-update model", meta.name)));
    }
    Ok((resolved, initial, mode))
}

fn resolve_edge_param(
    spec: &ParamSpec,
    graph: &Graph,
    global: Option<f64>,
    overrides: Option<&BTreeMap<EdgeKey, f64>>,
) -> Result<Vec<f64>> {
    let mut per_arc = vec![global.unwrap_or(f64::NAN); graph.arc_count()];
    if let Some(map) = overrides {
        for (&EdgeKey(u, v), &value) in map {
            let field = format!("edge_params.{}.{u},{v}", spec.name);
            if !graph.has_edge(u, v) {
                return Err(Error::config(field, "no such edge in the network"));
            }
            check_range(&field, spec, value)?;
            // The value applies to arc u -> v, stored among v's in-slots; undirected
            // edges also cover v -> u.
            let mut set = |src: NodeId, dst: NodeId| {
                let slots = graph.in_slots(dst);
                let pos = graph.in_neighbors(dst).binary_search(&src).expect("edge exists");
                per_arc[slots.start + pos] = value;
            };
            set(u, v);
            if !graph.is_directed() {
                set(v, u);
            }
        }
    }
    if per_arc.iter().any(|v| v.is_nan()) {
        return Err(Error::config(
            format!("model_params.{}", spec.name),
            "no value for some edges; set a global value or cover every edge",
        ));
    }
    Ok(per_arc)
}

fn resolve_initial(meta: &ModelMeta, n: usize, cfg: &ModelConfig) -> Result<ResolvedInitial> {
    let shorthand = cfg.model_params.get(PERCENTAGE_INFECTED).copied();
    let status_of = |field: &str, name: &str| {
        meta.status_code(name)
            .ok_or_else(|| Error::config(field, format!("unknown status `{name}` for model {}", meta.name)))
    };
    match (&cfg.initial, shorthand) {
        (Some(_), Some(_)) => Err(Error::config(
            format!("model_params.{PERCENTAGE_INFECTED}"),
            "cannot be combined with an explicit `initial` block",
        )),
        (None, None) => Ok(ResolvedInitial::Fraction(Vec::new())),
        (None, Some(f)) => {
            let field = format!("model_params.{PERCENTAGE_INFECTED}");
            let seed = meta.seed_status.ok_or_else(|| Error::config(&field, "model has no seed status"))?;
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::config(field, format!("{f} is not a fraction")));
            }
            Ok(ResolvedInitial::Fraction(vec![(seed, f)]))
        }
        (Some(InitialStatus::Fraction(map)), None) => {
            let mut out = Vec::new();
            let mut total = 0.0;
            for (name, &f) in map {
                let field = format!("initial.fraction.{name}");
                let code = status_of(&field, name)?;
                if code == ModelMeta::BASE {
                    return Err(Error::config(field, "the base status receives the unassigned mass"));
                }
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::config(field, format!("{f} is not a fraction")));
                }
                total += f;
                out.push((code, f));
            }
            if total > 1.0 + 1e-9 {
                return Err(Error::config("initial.fraction", format!("fractions sum to {total} > 1")));
            }
            out.sort_by_key(|&(code, _)| code);
            Ok(ResolvedInitial::Fraction(out))
        }
        (Some(InitialStatus::Planted(map)), None) => {
            let mut out = Vec::with_capacity(map.len());
            for (&node, name) in map {
                let field = format!("initial.planted.{node}");
                if node as usize >= n {
                    return Err(Error::config(field, format!("node id out of range (|V| = {n})")));
                }
                out.push((node, status_of(&field, name)?));
            }
            Ok(ResolvedInitial::Planted(out))
        }
    }
}
