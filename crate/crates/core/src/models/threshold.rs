//! Threshold-style adoption models and Independent Cascades.
//!
//! "Fraction of infected neighbours" always means infected in-neighbours over
//! in-degree. Nodes without in-neighbours have fraction 0 and, since every
//! threshold is non-negative and the comparison is strict, never activate
//! through peer influence.

use rand::seq::index;
use rand_chacha::ChaCha8Rng;

use super::{
    ModelDefinition, ModelMeta, ParamScope, ParamSpec, ResolvedParams, Rule, Schedule, Status,
    StepContext, TopologyKind,
};
use crate::engine::Topology;
use crate::graph::NodeId;
use crate::Result;

const S: Status = 0;
const I: Status = 1;
const R: Status = 2;
const BLOCKED: Status = 2;

const THRESHOLD: ParamSpec = ParamSpec::probability("threshold", ParamScope::Node, "adoption threshold tau in [0, 1]");
const PROFILE: ParamSpec = ParamSpec::probability("profile", ParamScope::Node, "adoption probability once exposed");

#[inline]
fn exceeds(ctx: &StepContext<'_>, node: NodeId, tau: f64) -> bool {
    let degree = ctx.graph.in_degree(node);
    if degree == 0 {
        return false;
    }
    let infected = ctx.count_in(node, I);
    infected as f64 / degree as f64 > tau
}

struct Threshold {
    tau: Vec<f64>,
}

impl Rule for Threshold {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: false }
    }

    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, _u: f64) -> Option<Status> {
        (ctx.statuses[node as usize] == S && exceeds(ctx, node, self.tau[node as usize])).then_some(I)
    }
}

pub struct ThresholdModel;

pub static THRESHOLD_META: ModelMeta = ModelMeta {
    name: "Threshold",
    description: "adopt when the infected fraction of neighbours strictly exceeds the node threshold",
    statuses: &["Susceptible", "Infected"],
    seed_status: Some(I),
    params: &[THRESHOLD],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for ThresholdModel {
    fn meta(&self) -> &ModelMeta {
        &THRESHOLD_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(Threshold { tau: p.node("threshold") }))
    }
}

/// Threshold with blocked (immune) nodes and spontaneous adoption.
struct Kertesz {
    tau: Vec<f64>,
    spontaneous: f64,
    blocked_density: f64,
}

impl Rule for Kertesz {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: true }
    }

    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, u: f64) -> Option<Status> {
        if ctx.statuses[node as usize] != S {
            return None;
        }
        (u < self.spontaneous || exceeds(ctx, node, self.tau[node as usize])).then_some(I)
    }

    fn prepare_initial(&self, statuses: &mut [Status], rng: &mut ChaCha8Rng) {
        if self.blocked_density <= 0.0 {
            return;
        }
        let pool: Vec<usize> = (0..statuses.len()).filter(|&v| statuses[v] == S).collect();
        let wanted = ((self.blocked_density * statuses.len() as f64).floor() as usize).max(1);
        let k = wanted.min(pool.len());
        for i in index::sample(rng, pool.len(), k) {
            statuses[pool[i]] = BLOCKED;
        }
    }
}

pub struct KerteszModel;

pub static KERTESZ_META: ModelMeta = ModelMeta {
    name: "KerteszThreshold",
    description: "threshold model with blocked nodes and spontaneous adoption",
    statuses: &["Susceptible", "Infected", "Blocked"],
    seed_status: Some(I),
    params: &[
        THRESHOLD,
        ParamSpec::probability("adopter_rate", ParamScope::Model, "spontaneous adoption probability p").with_default(0.0),
        ParamSpec::probability("blocked", ParamScope::Model, "density r of blocked nodes").with_default(0.0),
    ],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for KerteszModel {
    fn meta(&self) -> &ModelMeta {
        &KERTESZ_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(Kertesz {
            tau: p.node("threshold"),
            spontaneous: p.get("adopter_rate"),
            blocked_density: p.get("blocked"),
        }))
    }
}

/// Independent Cascades. Status `Infected` marks nodes activated in the
/// previous iteration; they get one chance per inactive out-neighbour and then
/// move to `Removed` (spent).
struct IndependentCascades {
    /// Activation probability per arc, aligned with the target's in-slots.
    p: Vec<f64>,
}

impl Rule for IndependentCascades {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: true }
    }

    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, u: f64) -> Option<Status> {
        match ctx.statuses[node as usize] {
            S => {
                let slots = ctx.graph.in_slots(node);
                let mut miss = 1.0;
                let mut attempts = false;
                for (&src, &p) in ctx.graph.in_neighbors(node).iter().zip(&self.p[slots]) {
                    if ctx.statuses[src as usize] == I {
                        miss *= 1.0 - p;
                        attempts = true;
                    }
                }
                (attempts && u < 1.0 - miss).then_some(I)
            }
            I => Some(R),
            _ => None,
        }
    }
}

pub struct IndependentCascadesModel;

pub static IC_META: ModelMeta = ModelMeta {
    name: "IndependentCascades",
    description: "newly active nodes get a single activation attempt per inactive neighbour",
    statuses: &["Susceptible", "Infected", "Removed"],
    seed_status: Some(I),
    params: &[ParamSpec::probability("p", ParamScope::Edge, "activation probability p(v, w) per edge")],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for IndependentCascadesModel {
    fn meta(&self) -> &ModelMeta {
        &IC_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(IndependentCascades { p: p.edge("p") }))
    }
}

/// Node Profile: exposure (any infected in-neighbour) triggers one biased coin
/// per iteration with the node's own profile.
struct Profile {
    profile: Vec<f64>,
}

impl Rule for Profile {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: true }
    }

    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, u: f64) -> Option<Status> {
        if ctx.statuses[node as usize] != S {
            return None;
        }
        let exposed = ctx.graph.in_neighbors(node).iter().any(|&v| ctx.statuses[v as usize] == I);
        (exposed && u < self.profile[node as usize]).then_some(I)
    }
}

pub struct ProfileModel;

pub static PROFILE_META: ModelMeta = ModelMeta {
    name: "Profile",
    description: "exposed nodes adopt with their personal profile probability",
    statuses: &["Susceptible", "Infected"],
    seed_status: Some(I),
    params: &[PROFILE],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for ProfileModel {
    fn meta(&self) -> &ModelMeta {
        &PROFILE_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(Profile { profile: p.node("profile") }))
    }
}

struct ProfileThreshold {
    tau: Vec<f64>,
    profile: Vec<f64>,
}

impl Rule for ProfileThreshold {
    fn schedule(&self) -> Schedule {
        Schedule::Synchronous { stochastic: true }
    }

    fn node_update(&self, ctx: &StepContext<'_>, node: NodeId, u: f64) -> Option<Status> {
        let v = node as usize;
        (ctx.statuses[v] == S && exceeds(ctx, node, self.tau[v]) && u < self.profile[v]).then_some(I)
    }
}

pub struct ProfileThresholdModel;

pub static PROFILE_THRESHOLD_META: ModelMeta = ModelMeta {
    name: "ProfileThreshold",
    description: "profile coin flipped only when the infected neighbour fraction exceeds the threshold",
    statuses: &["Susceptible", "Infected"],
    seed_status: Some(I),
    params: &[THRESHOLD, PROFILE],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for ProfileThresholdModel {
    fn meta(&self) -> &ModelMeta {
        &PROFILE_THRESHOLD_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(ProfileThreshold { tau: p.node("threshold"), profile: p.node("profile") }))
    }
}
