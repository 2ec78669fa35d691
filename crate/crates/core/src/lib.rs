//! Discrete-time, agent-based diffusion simulation over complex networks.
//!
//! The crate is organised around a small number of pieces:
//!
//! * [`graph`]: immutable static graphs, synthetic generators and edge-list I/O.
//! * [`dyngraph`]: temporal networks with interval-compressed interactions and
//!   snapshot sequences.
//! * [`engine`]: configuration, validation, synchronous iteration, incremental
//!   deltas and (parallel) multi-run execution.
//! * [`models`]: the epidemic, threshold/cascade, opinion and dynamic-network
//!   models, addressed by name through [`models::registry`].
//! * [`analytics`]: trend/prevalence series, comparisons, percentile bands and
//!   CSV/JSON/SVG export.
//!
//! ```
//! use std::sync::Arc;
//! use netdiff_core::prelude::*;
//!
//! let graph = generators::erdos_renyi(1000, 0.1, 7).unwrap();
//! let topology = Arc::new(Topology::Static(graph));
//! let cfg: ModelConfig = serde_json::from_str(
//!     r#"{"model_params": {"beta": 0.001, "gamma": 0.01, "percentage_infected": 0.05}}"#,
//! ).unwrap();
//! let mut sim = Simulation::new(topology, "SIR", cfg, 42).unwrap();
//! let deltas = sim.iteration_bunch(200).unwrap();
//! assert_eq!(deltas.len(), 200);
//! ```

pub mod analytics;
pub mod dyngraph;
pub mod engine;
mod error;
pub mod graph;
pub mod models;
pub mod par;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analytics::{self, BandedSeries, Series, SeriesKind};
    pub use crate::dyngraph::{FrozenTemporalGraph, PresenceInterval, SnapshotSequence, TemporalGraph};
    pub use crate::engine::{
        multi_runs, AttachedModel, Execution, ExecutionMode, InitialStatus, IterationDelta, ModelConfig,
        SimulationState, Simulation, Topology, Trajectory,
    };
    pub use crate::graph::{generators, Graph};
    pub use crate::models::registry;
    pub use crate::{Error, Result};
}
