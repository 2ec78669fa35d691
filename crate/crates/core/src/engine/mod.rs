//! Model configuration, synchronous iteration and multi-run execution.
//!
//! Randomness is positional. Iteration `i` of a run seeded with `s` draws from
//! ChaCha8 stream `i` of key `s`; a synchronous rule evaluates node `v` on the
//! uniform stored at words `2v, 2v+1` of that stream. Results are therefore
//! independent of how the node loop is split across threads.

mod config;
mod delta;
mod rng;
mod sim;

use crate::dyngraph::{FrozenTemporalGraph, SnapshotSequence};
use crate::graph::{Graph, Labels};

pub use config::{EdgeKey, ExecutionMode, InitialStatus, ModelConfig, PERCENTAGE_INFECTED};
pub use delta::{replay, IterationDelta, Trajectory, TrajectoryMeta};
pub use rng::child_seed;
pub use sim::{multi_runs, AttachedModel, Execution, Simulation, SimulationState};

/// The network a model runs on.
#[derive(Clone, Debug)]
pub enum Topology {
    Static(Graph),
    Snapshots(SnapshotSequence),
    Temporal(FrozenTemporalGraph),
}

impl Topology {
    pub fn node_count(&self) -> usize {
        match self {
            Topology::Static(g) => g.node_count(),
            Topology::Snapshots(s) => s.node_count(),
            Topology::Temporal(t) => t.node_count(),
        }
    }

    pub fn is_directed(&self) -> bool {
        match self {
            Topology::Static(g) => g.is_directed(),
            Topology::Snapshots(s) => s.is_directed(),
            Topology::Temporal(t) => t.graph().is_directed(),
        }
    }

    pub fn labels(&self) -> Option<&Labels> {
        match self {
            Topology::Static(g) => g.labels(),
            Topology::Snapshots(s) => s.labels(),
            Topology::Temporal(t) => t.graph().labels(),
        }
    }

    pub fn static_graph(&self) -> Option<&Graph> {
        match self {
            Topology::Static(g) => Some(g),
            _ => None,
        }
    }

    /// Content hash identifying the topology in trajectory metadata.
    pub fn digest(&self) -> String {
        match self {
            Topology::Static(g) => g.digest(),
            Topology::Snapshots(s) => s.digest(),
            Topology::Temporal(t) => t.graph().digest(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Topology::Static(_) => "static",
            Topology::Snapshots(_) => "snapshots",
            Topology::Temporal(_) => "temporal",
        }
    }
}

impl From<Graph> for Topology {
    fn from(g: Graph) -> Self {
        Topology::Static(g)
    }
}

impl From<SnapshotSequence> for Topology {
    fn from(s: SnapshotSequence) -> Self {
        Topology::Snapshots(s)
    }
}

impl From<FrozenTemporalGraph> for Topology {
    fn from(t: FrozenTemporalGraph) -> Self {
        Topology::Temporal(t)
    }
}
