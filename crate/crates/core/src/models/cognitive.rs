//! Cognitive Opinion Dynamics: per-agent cognitive state only.
//!
//! The model registers under its name so that it can be discovered and its
//! agent state validated, but its update rules are not implemented; attaching
//! it to a simulation fails with [`Error::NotImplemented`].

use serde::{Deserialize, Serialize};

use super::{ModelDefinition, ModelMeta, ResolvedParams, Rule, TopologyKind};
use crate::engine::Topology;
use crate::{Error, Result};

/// Fixed per-agent variables plus the evolving risk perception.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CognitiveState {
    /// Risk perception, in `[0, 1]`.
    pub opinion: f64,
    /// Risk sensitivity, one of `-1`, `0`, `1`.
    pub risk_sensitivity: i8,
    /// Tendency to inform others, in `[0, 1]`.
    pub tendency_to_inform: f64,
    /// Trust in institutions, in `[0, 1]`.
    pub institutional_trust: f64,
    /// Trust in peers; always `1 - institutional_trust`.
    pub peer_trust: f64,
}

impl CognitiveState {
    pub fn new(opinion: f64, risk_sensitivity: i8, tendency_to_inform: f64, institutional_trust: f64) -> Result<Self> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} is outside [0, 1]")))
            }
        };
        unit("opinion", opinion)?;
        unit("tendency_to_inform", tendency_to_inform)?;
        unit("institutional_trust", institutional_trust)?;
        if !(-1..=1).contains(&risk_sensitivity) {
            return Err(Error::param("risk_sensitivity", format!("{risk_sensitivity} is not one of -1, 0, 1")));
        }
        Ok(CognitiveState {
            opinion,
            risk_sensitivity,
            tendency_to_inform,
            institutional_trust,
            peer_trust: 1.0 - institutional_trust,
        })
    }
}

pub struct CognitiveOpinionDynamicsModel;

pub static COGNITIVE_META: ModelMeta = ModelMeta {
    name: "CognitiveOpinionDynamics",
    description: "continuous risk perception driven by cognitive variables (state only; dynamics not implemented)",
    statuses: &["Agent"],
    seed_status: None,
    params: &[],
    topology: TopologyKind::Static,
    micro: false,
};

impl ModelDefinition for CognitiveOpinionDynamicsModel {
    fn meta(&self) -> &ModelMeta {
        &COGNITIVE_META
    }

    fn build(&self, _topology: &Topology, _p: &ResolvedParams) -> Result<Box<dyn Rule>> {
        Err(Error::NotImplemented(
            "CognitiveOpinionDynamics update rules are defined in Vilone et al. (2016), \
             \"Reducing individuals' risk sensitiveness can promote positive and non-alarmist views \
             about catastrophic events in an agent-based simulation\"; only CognitiveState is provided"
                .into(),
        ))
    }
}
