use netdiff_core::dyngraph::{SnapshotSequence, TemporalGraph};
use netdiff_core::engine::Topology;
use netdiff_core::graph::{generators, load_edge_list};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

/// Where a network comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkSource {
    /// Edge-list text, one `u v` pair per line.
    Upload(String),
    Generator {
        name: String,
        #[serde(default)]
        params: Map<String, Value>,
        #[serde(default)]
        seed: u64,
    },
    /// `u v t` or `u v t_start t_end` lines.
    Temporal(String),
    /// Edge lists separated by `# snapshot <id>` headers.
    Snapshots(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    #[serde(flatten)]
    pub source: NetworkSource,
    #[serde(default)]
    pub directed: bool,
}

impl NetworkSpec {
    pub fn build(&self) -> netdiff_core::Result<Topology> {
        Ok(match &self.source {
            NetworkSource::Upload(text) => Topology::Static(load_edge_list(text, self.directed)?),
            NetworkSource::Generator { name, params, seed } => {
                let g = generators::by_name(name, params, *seed)?;
                if self.directed {
                    return Err(netdiff_core::Error::Param {
                        name: "directed".into(),
                        message: "generators produce undirected graphs".into(),
                    });
                }
                Topology::Static(g)
            }
            NetworkSource::Temporal(text) => Topology::Temporal(TemporalGraph::parse(text, self.directed)?.freeze()),
            NetworkSource::Snapshots(text) => Topology::Snapshots(SnapshotSequence::parse(text, self.directed)?),
        })
    }
}

pub fn summary(topology: &Topology) -> Value {
    let mut out = json!({
        "kind": topology.kind(),
        "nodes": topology.node_count(),
        "directed": topology.is_directed(),
        "digest": topology.digest(),
    });
    match topology {
        Topology::Static(g) => {
            out["edges"] = json!(g.edge_count());
            out["self_loops_dropped"] = json!(g.self_loops_dropped());
        }
        Topology::Snapshots(s) => {
            out["snapshots"] = json!(s.len());
            out["snapshot_ids"] = json!(s.iter().map(|x| x.id).collect::<Vec<_>>());
        }
        Topology::Temporal(t) => {
            out["interactions"] = json!(t.graph().interaction_count());
            out["first_timestamp"] = json!(t.first_timestamp());
            out["last_timestamp"] = json!(t.last_timestamp());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattened_json_shapes() {
        let spec: NetworkSpec = serde_json::from_str(r#"{"upload": "0 1\n1 2\n"}"#).unwrap();
        assert_eq!(spec.build().unwrap().node_count(), 3);
        let spec: NetworkSpec =
            serde_json::from_str(r#"{"generator": {"name": "erdos_renyi", "params": {"n": 50, "p": 0.1}, "seed": 3}}"#)
                .unwrap();
        assert_eq!(summary(&spec.build().unwrap())["nodes"], 50);
        let spec: NetworkSpec = serde_json::from_str(r#"{"temporal": "0 1 3\n", "directed": true}"#).unwrap();
        assert_eq!(summary(&spec.build().unwrap())["first_timestamp"], 3);
    }
}
