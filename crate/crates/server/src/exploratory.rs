use std::collections::BTreeMap;
use std::path::Path;

use netdiff_core::engine::ModelConfig;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::network::{NetworkSource, NetworkSpec};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExploratoryModel {
    pub name: String,
    pub config: ModelConfig,
}

/// A packaged scenario: network, planted statuses and model configs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Exploratory {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub network: NetworkSpec,
    pub models: Vec<ExploratoryModel>,
}

fn generator(name: &str, params: serde_json::Value, seed: u64) -> NetworkSpec {
    let params = params.as_object().cloned().unwrap_or_default();
    NetworkSpec { source: NetworkSource::Generator { name: name.into(), params, seed }, directed: false }
}

fn builtins() -> Vec<Exploratory> {
    let seeds = |k: u32, status: &'static str| (0..k).map(move |v| (v, status));
    let ring_contacts: String = (0..20u32).map(|t| format!("{} {} {}\n", t % 10, (t + 1) % 10, t)).collect();
    vec![
        Exploratory {
            id: "er-sir".into(),
            description: "SIR on an Erdos-Renyi graph (1000 nodes, p=0.1) from ten planted infected nodes".into(),
            network: generator("erdos_renyi", json!({"n": 1000, "p": 0.1}), 1),
            models: vec![ExploratoryModel {
                name: "SIR".into(),
                config: ModelConfig::new()
                    .param("beta", 0.001)
                    .param("gamma", 0.01)
                    .planted(seeds(10, "Infected"))
                    .with_seed(42),
            }],
        },
        Exploratory {
            id: "ws-threshold".into(),
            description: "Threshold cascade on a small-world ring (500 nodes, k=6, p=0.1)".into(),
            network: generator("watts_strogatz", json!({"n": 500, "k": 6, "p": 0.1}), 2),
            models: vec![ExploratoryModel {
                name: "Threshold".into(),
                config: ModelConfig::new().param("threshold", 0.3).planted(seeds(25, "Infected")).with_seed(7),
            }],
        },
        Exploratory {
            id: "complete-voter".into(),
            description: "Voter and Majority Rule on K25 with 40% positive opinions".into(),
            network: generator("complete", json!({"n": 25}), 0),
            models: vec![
                ExploratoryModel {
                    name: "Voter".into(),
                    config: ModelConfig::new().planted(seeds(10, "Positive")).with_seed(3),
                },
                ExploratoryModel {
                    name: "MajorityRule".into(),
                    config: ModelConfig::new().param("r", 3.0).planted(seeds(10, "Positive")).with_seed(3),
                },
            ],
        },
        Exploratory {
            id: "ring-contacts-dynsi".into(),
            description: "DynSI over timestamped contacts that walk around a ten-node ring".into(),
            network: NetworkSpec { source: NetworkSource::Temporal(ring_contacts), directed: false },
            models: vec![ExploratoryModel {
                name: "DynSI".into(),
                config: ModelConfig::new().param("beta", 1.0).planted(seeds(1, "Infected")).with_seed(1),
            }],
        },
    ]
}

/// Built-in scenarios plus any `*.json` exploratory files found in `dir`.
/// Files override built-ins with the same id.
pub fn load(dir: Option<&Path>) -> std::io::Result<BTreeMap<String, Exploratory>> {
    let mut out: BTreeMap<String, Exploratory> = builtins().into_iter().map(|e| (e.id.clone(), e)).collect();
    let Some(dir) = dir else { return Ok(out) };
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let e: Exploratory = serde_json::from_str(&text)
            .map_err(|err| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {err}", path.display())))?;
        out.insert(e.id.clone(), e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use netdiff_core::engine::Simulation;

    use super::*;

    #[test]
    fn builtins_attach_and_step() {
        for e in builtins() {
            let topology = Arc::new(e.network.build().unwrap());
            for m in &e.models {
                let mut sim = Simulation::new(Arc::clone(&topology), &m.name, m.config.clone(), 0).unwrap();
                sim.iteration_bunch(3).unwrap();
            }
        }
    }
}
