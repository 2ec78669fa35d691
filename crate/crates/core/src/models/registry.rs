//! Name-based model lookup used by configuration documents and the REST API.

use super::cognitive::CognitiveOpinionDynamicsModel;
use super::dynamic::{DynSiModel, DynSirModel, DynSisModel};
use super::epidemic::{SeirModel, SeisModel, SiModel, SirModel, SisModel, SwirModel};
use super::opinion::{MajorityRuleModel, QVoterModel, SznajdModel, VoterModel};
use super::threshold::{IndependentCascadesModel, KerteszModel, ProfileModel, ProfileThresholdModel, ThresholdModel};
use super::{ModelDefinition, ModelMeta};
use crate::engine::{ModelConfig, PERCENTAGE_INFECTED};

static MODELS: &[&dyn ModelDefinition] = &[
    &SiModel,
    &SisModel,
    &SirModel,
    &SeisModel,
    &SeirModel,
    &SwirModel,
    &ThresholdModel,
    &KerteszModel,
    &IndependentCascadesModel,
    &ProfileModel,
    &ProfileThresholdModel,
    &VoterModel,
    &SznajdModel,
    &QVoterModel,
    &MajorityRuleModel,
    &CognitiveOpinionDynamicsModel,
    &DynSiModel,
    &DynSisModel,
    &DynSirModel,
];

pub fn get(name: &str) -> Option<&'static dyn ModelDefinition> {
    MODELS.iter().copied().find(|m| m.meta().name == name)
}

pub fn meta(name: &str) -> Option<&'static ModelMeta> {
    get(name).map(|m| m.meta())
}

pub fn names() -> impl Iterator<Item = &'static str> {
    MODELS.iter().map(|m| m.meta().name)
}

pub fn all() -> impl Iterator<Item = &'static dyn ModelDefinition> {
    MODELS.iter().copied()
}

/// A small, valid configuration for `name`, suitable for demos and smoke runs.
pub fn example_config(name: &str) -> Option<ModelConfig> {
    let base = ModelConfig::new();
    let cfg = match name {
        "SI" | "DynSI" => base.param("beta", 0.05).param(PERCENTAGE_INFECTED, 0.05),
        "SIS" | "DynSIS" => base.param("beta", 0.05).param("lambda", 0.02).param(PERCENTAGE_INFECTED, 0.05),
        "SIR" | "DynSIR" => base.param("beta", 0.05).param("gamma", 0.02).param(PERCENTAGE_INFECTED, 0.05),
        "SEIS" => base.param("beta", 0.05).param("epsilon", 0.1).param("lambda", 0.02).param(PERCENTAGE_INFECTED, 0.05),
        "SEIR" => base.param("beta", 0.05).param("epsilon", 0.1).param("gamma", 0.02).param(PERCENTAGE_INFECTED, 0.05),
        "SWIR" => base.param("kappa", 0.05).param("mu", 0.05).param("nu", 0.05).param(PERCENTAGE_INFECTED, 0.05),
        "Threshold" => base.param("threshold", 0.25).param(PERCENTAGE_INFECTED, 0.1),
        "KerteszThreshold" => base
            .param("threshold", 0.25)
            .param("adopter_rate", 0.01)
            .param("blocked", 0.1)
            .param(PERCENTAGE_INFECTED, 0.1),
        "IndependentCascades" => base.param("p", 0.1).param(PERCENTAGE_INFECTED, 0.1),
        "Profile" => base.param("profile", 0.25).param(PERCENTAGE_INFECTED, 0.1),
        "ProfileThreshold" => base.param("threshold", 0.25).param("profile", 0.5).param(PERCENTAGE_INFECTED, 0.1),
        "Voter" | "Sznajd" => base.param(PERCENTAGE_INFECTED, 0.5),
        "QVoter" => base.param("q", 3.0).param(PERCENTAGE_INFECTED, 0.5),
        "MajorityRule" => base.param("r", 3.0).param(PERCENTAGE_INFECTED, 0.5),
        "CognitiveOpinionDynamics" => base,
        _ => return None,
    };
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_complete() {
        let names: Vec<_> = names().collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        for expected in [
            "SI", "SIS", "SIR", "SEIS", "SEIR", "SWIR", "Threshold", "KerteszThreshold", "IndependentCascades",
            "Profile", "ProfileThreshold", "Voter", "Sznajd", "QVoter", "MajorityRule", "CognitiveOpinionDynamics",
            "DynSI", "DynSIS", "DynSIR",
        ] {
            assert!(get(expected).is_some(), "{expected} missing");
        }
        assert!(get("sir").is_none());
    }

    #[test]
    fn every_model_has_an_example() {
        for name in names() {
            assert!(example_config(name).is_some(), "{name}");
        }
    }

    #[test]
    fn base_status_first() {
        for m in all() {
            assert!(!m.meta().statuses.is_empty());
            if let Some(s) = m.meta().seed_status {
                assert!((s as usize) < m.meta().statuses.len());
                assert_ne!(s, 0);
            }
        }
    }
}
