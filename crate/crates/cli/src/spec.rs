use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use netdiff_core::analytics::ExportFormat;
use netdiff_core::engine::{ExecutionMode, ModelConfig, Topology};
use netdiff_server::network::{NetworkSource, NetworkSpec};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Network section: a file on disk or a generator. Relative paths resolve
/// against the spec file's directory.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkInput {
    /// Static edge list.
    File { path: PathBuf, #[serde(default)] directed: bool },
    /// `u v t` / `u v t_start t_end` interaction list.
    Temporal { path: PathBuf, #[serde(default)] directed: bool },
    /// Edge lists separated by `# snapshot <id>` headers.
    Snapshots { path: PathBuf, #[serde(default)] directed: bool },
    Generator {
        name: String,
        #[serde(default)]
        params: Map<String, Value>,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEntry {
    pub name: String,
    /// Artifact prefix; defaults to `name`.
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub config: ModelConfig,
}

impl ModelEntry {
    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Execution {
    pub iterations: usize,
    #[serde(default = "one")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Default for models whose config leaves it unset.
    #[serde(default)]
    pub execution_mode: Option<ExecutionMode>,
    /// Band percentiles when `runs > 1`.
    #[serde(default = "default_band")]
    pub band: [f64; 2],
}

fn one() -> usize {
    1
}

fn default_band() -> [f64; 2] {
    [5.0, 95.0]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub directory: PathBuf,
    #[serde(default = "all_formats")]
    pub formats: Vec<String>,
}

fn all_formats() -> Vec<String> {
    vec!["json".into(), "csv".into(), "svg".into()]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub network: NetworkInput,
    pub models: Vec<ModelEntry>,
    pub execution: Execution,
    pub output: Output,
}

impl RunSpec {
    /// Reads and parses `path`, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut spec = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        spec.resolve_paths(base);
        Ok(spec)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("run spec: {e}")))
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.network {
            NetworkInput::File { path, .. } | NetworkInput::Temporal { path, .. } | NetworkInput::Snapshots { path, .. } => {
                fix(path)
            }
            NetworkInput::Generator { .. } => {}
        }
        fix(&mut self.output.directory);
    }

    /// Checks everything that does not need the network.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.models.is_empty() {
            return Err(CliError::Config("models: at least one model is required".into()));
        }
        if self.execution.runs == 0 {
            return Err(CliError::Config("execution.runs: must be at least 1".into()));
        }
        let [lo, hi] = self.execution.band;
        if !(0.0..=100.0).contains(&lo) || !(0.0..=100.0).contains(&hi) || lo >= hi {
            return Err(CliError::Config(format!("execution.band: need 0 <= lower < upper <= 100, got [{lo}, {hi}]")));
        }
        let mut labels = BTreeSet::new();
        for (i, m) in self.models.iter().enumerate() {
            if netdiff_core::models::registry::get(&m.name).is_none() {
                return Err(CliError::Config(format!("models[{i}].name: unknown model `{}`", m.name)));
            }
            let label = m.label();
            if label.is_empty() || label.contains(['/', '\\']) {
                return Err(CliError::Config(format!("models[{i}].label: `{label}` is not a usable file prefix")));
            }
            if !labels.insert(label) {
                return Err(CliError::Config(format!(
                    "models[{i}].label: `{label}` is used twice; give each model a distinct label"
                )));
            }
        }
        self.formats()?;
        Ok(())
    }

    pub fn formats(&self) -> Result<Vec<ExportFormat>, CliError> {
        self.output
            .formats
            .iter()
            .map(|f| f.parse::<ExportFormat>().map_err(|e| CliError::Config(format!("output.formats: {e}"))))
            .collect()
    }

    pub fn build_network(&self) -> Result<Topology, CliError> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| CliError::io(p, e));
        let spec = match &self.network {
            NetworkInput::File { path, directed } => {
                NetworkSpec { source: NetworkSource::Upload(read(path)?), directed: *directed }
            }
            NetworkInput::Temporal { path, directed } => {
                NetworkSpec { source: NetworkSource::Temporal(read(path)?), directed: *directed }
            }
            NetworkInput::Snapshots { path, directed } => {
                NetworkSpec { source: NetworkSource::Snapshots(read(path)?), directed: *directed }
            }
            NetworkInput::Generator { name, params, seed } => NetworkSpec {
                source: NetworkSource::Generator { name: name.clone(), params: params.clone(), seed: *seed },
                directed: false,
            },
        };
        Ok(spec.build()?)
    }

    /// Model config with the execution defaults filled in.
    pub fn model_config(&self, entry: &ModelEntry, topology: &Topology) -> ModelConfig {
        let mut cfg = entry.config.clone();
        if cfg.execution_mode.is_none() && !matches!(topology, Topology::Static(_)) {
            cfg.execution_mode = self.execution.execution_mode;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING: &str = r#"{
        "network": {"generator": {"name": "erdos_renyi", "params": {"n": 1000, "p": 0.1}}},
        "models": [{"name": "SIR", "config": {"model_params": {"beta": 0.001, "gamma": 0.01, "percentage_infected": 0.05}}}],
        "execution": {"iterations": 200},
        "output": {"directory": "out"}
    }"#;

    #[test]
    fn listing_parses_with_defaults() {
        let spec = RunSpec::parse(LISTING).unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.execution.runs, 1);
        assert_eq!(spec.formats().unwrap().len(), 3);
        assert_eq!(spec.models[0].label(), "SIR");
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let mut spec = RunSpec::parse(LISTING).unwrap();
        spec.models.push(spec.models[0].clone());
        let err = spec.validate().unwrap_err();
        assert!(err.to_string().contains("models[1].label"), "{err}");
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let err = RunSpec::parse(r#"{"network": {}, "modles": []}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
