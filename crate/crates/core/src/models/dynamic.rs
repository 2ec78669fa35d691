//! DynSI, DynSIS and DynSIR: compartmental models over an evolving topology.
//!
//! The engine hands each iteration the graph of the current snapshot (or the
//! temporal slice of the current timestamp); the infection state carries over
//! between steps. The per-step kernels are the static ones.

use super::epidemic::{Compartmental, BETA, GAMMA, LAMBDA};
use super::{ModelDefinition, ModelMeta, ResolvedParams, Rule, TopologyKind};
use crate::engine::Topology;
use crate::Result;

macro_rules! dynamic_model {
    ($ty:ident, $meta:ident, $name:literal, $desc:literal, [$($status:literal),+], [$($param:expr),+], |$p:ident| $build:expr) => {
        pub struct $ty;

        pub static $meta: ModelMeta = ModelMeta {
            name: $name,
            description: $desc,
            statuses: &[$($status),+],
            seed_status: Some(1),
            params: &[$($param),+],
            topology: TopologyKind::Dynamic,
            micro: false,
        };

        impl ModelDefinition for $ty {
            fn meta(&self) -> &ModelMeta {
                &$meta
            }

            fn build(&self, _topology: &Topology, $p: &ResolvedParams) -> Result<Box<dyn Rule>> {
                Ok(Box::new($build))
            }
        }
    };
}

dynamic_model!(
    DynSiModel, DYN_SI_META, "DynSI", "SI over snapshots or temporal interactions",
    ["Susceptible", "Infected"], [BETA],
    |p| Compartmental::si(p.get("beta"))
);
dynamic_model!(
    DynSisModel, DYN_SIS_META, "DynSIS", "SIS over snapshots or temporal interactions",
    ["Susceptible", "Infected"], [BETA, LAMBDA],
    |p| Compartmental::sis(p.get("beta"), p.get("lambda"))
);
dynamic_model!(
    DynSirModel, DYN_SIR_META, "DynSIR", "SIR over snapshots or temporal interactions",
    ["Susceptible", "Infected", "Removed"], [BETA, GAMMA],
    |p| Compartmental::sir(p.get("beta"), p.get("gamma"))
);
