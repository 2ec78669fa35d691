//! Diffusion models and the contract the engine drives them through.
//!
//! A model is described by a [`ModelDefinition`]: static metadata (status
//! vocabulary and declared parameters) plus a builder that turns validated,
//! resolved parameters into a [`Rule`]. Rules come in two schedules:
//!
//! * [`Schedule::Synchronous`]: every node is evaluated against the frozen
//!   pre-iteration status array. Stochastic rules receive exactly one uniform
//!   draw per node, taken from position `node` of the iteration's random
//!   stream, and express every transition as an inverse CDF on that draw.
//! * [`Schedule::Micro`]: one (or, in sweep mode, `|V|`) asynchronous
//!   micro-updates drawing sequentially from the iteration's random stream.

pub mod cognitive;
pub mod dynamic;
pub mod epidemic;
pub mod opinion;
pub mod registry;
pub mod threshold;

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::Topology;
use crate::graph::{Graph, NodeId};
use crate::Result;

/// Model-local dense status code, in declaration order.
pub type Status = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamScope {
    /// A single global value.
    Model,
    /// One value per node; a model-level value of the same name acts as the default.
    Node,
    /// One value per edge; a model-level value of the same name acts as the default.
    Edge,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub scope: ParamScope,
    pub default: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub integer: bool,
    pub description: &'static str,
}

impl ParamSpec {
    pub const fn probability(name: &'static str, scope: ParamScope, description: &'static str) -> Self {
        ParamSpec { name, scope, default: None, min: 0.0, max: 1.0, integer: false, description }
    }

    pub const fn with_default(mut self, value: f64) -> Self {
        self.default = Some(value);
        self
    }

    pub const fn count(name: &'static str, min: f64, description: &'static str) -> Self {
        ParamSpec { name, scope: ParamScope::Model, default: None, min, max: u32::MAX as f64, integer: true, description }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    Static,
    Dynamic,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModelMeta {
    pub name: &'static str,
    pub description: &'static str,
    /// Status names; the index is the status code. Code 0 is the base status.
    pub statuses: &'static [&'static str],
    /// Status seeded by the `percentage_infected` shorthand.
    pub seed_status: Option<Status>,
    pub params: &'static [ParamSpec],
    pub topology: TopologyKind,
    pub micro: bool,
}

impl ModelMeta {
    pub const BASE: Status = 0;

    pub fn status_code(&self, name: &str) -> Option<Status> {
        self.statuses.iter().position(|s| *s == name).map(|i| i as Status)
    }

    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

/// Parameter values after defaulting, ready for a rule builder.
#[derive(Clone, Debug, Default)]
pub struct ResolvedParams {
    pub model: BTreeMap<String, f64>,
    /// Per node, indexed by node id.
    pub node: BTreeMap<String, Vec<f64>>,
    /// Per arc, aligned with [`Graph::in_slots`] of the static graph.
    pub edge: BTreeMap<String, Vec<f64>>,
    pub node_count: usize,
}

impl ResolvedParams {
    /// Model-level value. Validation guarantees declared parameters are present.
    pub fn get(&self, name: &str) -> f64 {
        self.model[name]
    }

    pub fn node(&self, name: &str) -> Vec<f64> {
        self.node[name].clone()
    }

    pub fn edge(&self, name: &str) -> Vec<f64> {
        self.edge[name].clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Synchronous { stochastic: bool },
    Micro,
}

/// Read-only view a synchronous rule evaluates a node against.
pub struct StepContext<'a> {
    pub graph: &'a Graph,
    /// Frozen pre-iteration statuses.
    pub statuses: &'a [Status],
}

impl StepContext<'_> {
    /// Number of in-neighbours of `node` currently in `status`.
    #[inline]
    pub fn count_in(&self, node: NodeId, status: Status) -> usize {
        self.graph.in_neighbors(node).iter().filter(|&&v| self.statuses[v as usize] == status).count()
    }
}

pub trait Rule: Send + Sync {
    fn schedule(&self) -> Schedule;

    /// New status for `node`, or `None` to keep it. `u` is the node's uniform
    /// draw in `[0, 1)`; deterministic rules ignore it.
    fn node_update(&self, _ctx: &StepContext<'_>, _node: NodeId, _u: f64) -> Option<Status> {
        None
    }

    /// One asynchronous micro-update against the current statuses. Pushes
    /// `(node, new_status)` for every node it changes.
    fn micro_update(
        &self,
        _graph: &Graph,
        _statuses: &[Status],
        _rng: &mut ChaCha8Rng,
        _changes: &mut Vec<(NodeId, Status)>,
    ) {
    }

    /// Adjusts freshly sampled initial statuses (e.g. placing blocked nodes).
    fn prepare_initial(&self, _statuses: &mut [Status], _rng: &mut ChaCha8Rng) {}
}

pub trait ModelDefinition: Send + Sync {
    fn meta(&self) -> &ModelMeta;

    /// Builds the rule from validated parameters. Model-specific constraints
    /// not expressible in [`ParamSpec`] are checked here.
    fn build(&self, topology: &Topology, params: &ResolvedParams) -> Result<Box<dyn Rule>>;
}

/// `1 - (1 - p)^k`: probability that at least one of `k` independent trials succeeds.
#[inline]
pub(crate) fn any_success(p: f64, k: usize) -> f64 {
    match k {
        0 => 0.0,
        1 => p,
        _ => 1.0 - (1.0 - p).powi(k as i32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn any_success_matches_complement() {
        assert_eq!(any_success(0.3, 0), 0.0);
        assert_eq!(any_success(0.3, 1), 0.3);
        assert!((any_success(0.5, 2) - 0.75).abs() < 1e-12);
        assert_eq!(any_success(0.0, 10), 0.0);
        assert_eq!(any_success(1.0, 3), 1.0);
    }
}
