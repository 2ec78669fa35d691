#![allow(dead_code)]

pub mod oracles;

use std::sync::Arc;

use netdiff_core::dyngraph::TemporalGraph;
use netdiff_core::engine::{AttachedModel, ModelConfig, Topology};
use netdiff_core::graph::{generators, Graph};
use netdiff_core::models::{registry, TopologyKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every registered model that can actually run.
pub fn runnable_models() -> Vec<&'static str> {
    registry::names().filter(|n| *n != "CognitiveOpinionDynamics").collect()
}

/// Spreads the edges of `g` over timestamps `0..horizon`, one instant each.
pub fn temporal_from(g: &Graph, horizon: i64, seed: u64) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tg = TemporalGraph::new(g.is_directed());
    for (u, v) in g.edges() {
        tg.add_interaction(u, v, rng.gen_range(0..horizon));
    }
    // Anchor the time domain and make every node present at the start.
    for v in 0..g.node_count() as u32 {
        tg.add_node_presence(v, netdiff_core::dyngraph::PresenceInterval::new(0, horizon).unwrap());
    }
    tg
}

/// ER(n, p) for static models; the same edges scattered over `horizon`
/// timestamps for dynamic ones.
pub fn topology_for(name: &str, n: usize, p: f64, horizon: i64, seed: u64) -> Arc<Topology> {
    let g = generators::erdos_renyi(n, p, seed).unwrap();
    let meta = registry::meta(name).unwrap();
    Arc::new(match meta.topology {
        TopologyKind::Static => Topology::Static(g),
        TopologyKind::Dynamic => Topology::Temporal(temporal_from(&g, horizon, seed ^ 0x5eed).freeze()),
    })
}

pub fn attach(name: &str, topology: Arc<Topology>, cfg: ModelConfig) -> AttachedModel {
    AttachedModel::attach(topology, name, cfg).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn example(name: &str) -> ModelConfig {
    registry::example_config(name).unwrap()
}
