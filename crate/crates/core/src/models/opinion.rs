//! Discrete opinion dynamics: Voter, Sznajd, Q-Voter and Majority Rule.
//!
//! Opinions `-1` and `+1` are status codes 0 (`Negative`) and 1 (`Positive`).
//! Each engine iteration performs one asynchronous micro-update.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{ModelDefinition, ModelMeta, ParamSpec, ResolvedParams, Rule, Schedule, Status, TopologyKind};
use crate::engine::Topology;
use crate::graph::{Graph, NodeId};
use crate::{Error, Result};

const STATUSES: &[&str] = &["Negative", "Positive"];
const POSITIVE: Status = 1;

/// Uniform index below `n`. All opinion rules pick through this so that draw
/// sequences line up between models that share a selection step.
#[inline]
fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n)
}

/// The target of a micro-update: uniform node `u` and its influencing neighbourhood.
fn target<'g>(graph: &'g Graph, rng: &mut ChaCha8Rng) -> Option<(NodeId, &'g [NodeId])> {
    let n = graph.node_count();
    if n == 0 {
        return None;
    }
    let u = pick(rng, n) as NodeId;
    let nbrs = graph.in_neighbors(u);
    (!nbrs.is_empty()).then_some((u, nbrs))
}

struct Voter;

impl Rule for Voter {
    fn schedule(&self) -> Schedule {
        Schedule::Micro
    }

    fn micro_update(&self, graph: &Graph, statuses: &[Status], rng: &mut ChaCha8Rng, changes: &mut Vec<(NodeId, Status)>) {
        let Some((u, nbrs)) = target(graph, rng) else { return };
        let v = nbrs[pick(rng, nbrs.len())];
        let opinion = statuses[v as usize];
        if statuses[u as usize] != opinion {
            changes.push((u, opinion));
        }
    }
}

/// Q-Voter with flip probability 0: the target copies a panel of `q` distinct
/// neighbours (its whole neighbourhood if smaller) when the panel is unanimous.
struct QVoter {
    q: usize,
}

impl Rule for QVoter {
    fn schedule(&self) -> Schedule {
        Schedule::Micro
    }

    fn micro_update(&self, graph: &Graph, statuses: &[Status], rng: &mut ChaCha8Rng, changes: &mut Vec<(NodeId, Status)>) {
        let Some((u, nbrs)) = target(graph, rng) else { return };
        let k = self.q.min(nbrs.len());
        // Partial Fisher-Yates: the first k entries become the panel.
        let mut pool = nbrs.to_vec();
        for i in 0..k {
            let j = i + pick(rng, pool.len() - i);
            pool.swap(i, j);
        }
        let opinion = statuses[pool[0] as usize];
        if pool[..k].iter().all(|&v| statuses[v as usize] == opinion) && statuses[u as usize] != opinion {
            changes.push((u, opinion));
        }
    }
}

/// Sznajd on a general graph: a uniform edge whose endpoints agree converts
/// the union of both endpoints' neighbourhoods.
struct Sznajd;

impl Rule for Sznajd {
    fn schedule(&self) -> Schedule {
        Schedule::Micro
    }

    fn micro_update(&self, graph: &Graph, statuses: &[Status], rng: &mut ChaCha8Rng, changes: &mut Vec<(NodeId, Status)>) {
        let arcs = graph.arc_count();
        if arcs == 0 {
            return;
        }
        let slot = pick(rng, arcs);
        let (u, v) = (graph.arc_source(slot), graph.arc_target(slot));
        let opinion = statuses[u as usize];
        if statuses[v as usize] != opinion {
            return;
        }
        let mut converted: Vec<NodeId> = graph
            .neighbors(u)
            .iter()
            .chain(graph.neighbors(v))
            .copied()
            .filter(|&w| w != u && w != v && statuses[w as usize] != opinion)
            .collect();
        converted.sort_unstable();
        converted.dedup();
        changes.extend(converted.into_iter().map(|w| (w, opinion)));
    }
}

/// Majority Rule on the complete interaction graph: a uniform group of `r`
/// agents adopts its majority opinion; ties go to `+1`.
struct Majority {
    r: usize,
}

impl Rule for Majority {
    fn schedule(&self) -> Schedule {
        Schedule::Micro
    }

    fn micro_update(&self, graph: &Graph, statuses: &[Status], rng: &mut ChaCha8Rng, changes: &mut Vec<(NodeId, Status)>) {
        let group = index::sample(rng, graph.node_count(), self.r).into_vec();
        let positives = group.iter().filter(|&&v| statuses[v] == POSITIVE).count();
        let opinion = if 2 * positives >= self.r { POSITIVE } else { 0 };
        let mut members: Vec<usize> = group.into_iter().filter(|&v| statuses[v] != opinion).collect();
        members.sort_unstable();
        changes.extend(members.into_iter().map(|v| (v as NodeId, opinion)));
    }
}

macro_rules! opinion_meta {
    ($meta:ident, $name:literal, $desc:literal, [$($param:expr),*]) => {
        pub static $meta: ModelMeta = ModelMeta {
            name: $name,
            description: $desc,
            statuses: STATUSES,
            seed_status: Some(POSITIVE),
            params: &[$($param),*],
            topology: TopologyKind::Static,
            micro: true,
        };
    };
}

opinion_meta!(VOTER_META, "Voter", "a random node copies a random neighbour", []);
opinion_meta!(SZNAJD_META, "Sznajd", "an agreeing neighbouring pair converts its neighbourhood", []);
opinion_meta!(QVOTER_META, "QVoter", "a unanimous panel of q neighbours converts the target", [
    ParamSpec::count("q", 1.0, "panel size")
]);
opinion_meta!(MAJORITY_META, "MajorityRule", "a random group of r agents adopts its majority (ties to +1)", [
    ParamSpec::count("r", 1.0, "group size")
]);

pub struct VoterModel;
pub struct SznajdModel;
pub struct QVoterModel;
pub struct MajorityRuleModel;

impl ModelDefinition for VoterModel {
    fn meta(&self) -> &ModelMeta {
        &VOTER_META
    }

    fn build(&self, _topology: &Topology, _p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(Voter))
    }
}

impl ModelDefinition for SznajdModel {
    fn meta(&self) -> &ModelMeta {
        &SZNAJD_META
    }

    fn build(&self, _topology: &Topology, _p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(Sznajd))
    }
}

impl ModelDefinition for QVoterModel {
    fn meta(&self) -> &ModelMeta {
        &QVOTER_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Ok(Box::new(QVoter { q: p.get("q") as usize }))
    }
}

impl ModelDefinition for MajorityRuleModel {
    fn meta(&self) -> &ModelMeta {
        &MAJORITY_META
    }

    fn build(&self, _topology: &Topology, p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        let r = p.get("r") as usize;
        if r > p.node_count {
            return Err(Error::config(
                "model_params.r",
                format!("group size {r} exceeds the {} available agents", p.node_count),
            ));
        }
        Ok(Box::new(Majority { r }))
    }
}
