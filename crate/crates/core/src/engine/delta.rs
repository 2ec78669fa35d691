use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ModelConfig;
use crate::graph::NodeId;
use crate::models::Status;

/// Incremental record of one iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationDelta {
    pub iteration: u64,
    /// Nodes whose status changed, ascending by node id. Iteration 0 lists every node.
    #[serde(rename = "status", with = "node_status_map")]
    pub changed: Vec<(NodeId, Status)>,
    /// Nodes per status code after this iteration.
    pub node_count: BTreeMap<Status, u64>,
    /// Signed change of `node_count` relative to the previous iteration.
    pub status_delta: BTreeMap<Status, i64>,
    /// Snapshot id or timestamp processed by this iteration (dynamic models).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<i64>,
}

/// Serialises `Vec<(node, status)>` as a JSON object keyed by node id.
mod node_status_map {
    use super::{NodeId, Status};
    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(NodeId, Status)], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(v.len()))?;
        for (node, status) in v {
            map.serialize_entry(node, status)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(NodeId, Status)>, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Vec<(NodeId, Status)>;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a map of node id to status code")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some(entry) = map.next_entry::<NodeId, Status>()? {
                    out.push(entry);
                }
                out.sort_unstable_by_key(|&(n, _)| n);
                Ok(out)
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub model: String,
    pub params: ModelConfig,
    pub seed: u64,
    pub graph_digest: String,
    /// Status names indexed by status code.
    pub statuses: Vec<String>,
    /// What one iteration means: `iteration`, `micro_update`, `sweep`, `snapshot` or `timestamp`.
    pub time_unit: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub meta: TrajectoryMeta,
    pub iterations: Vec<IterationDelta>,
}

impl Trajectory {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trajectory serialises")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("trajectory serialises")
    }

    /// Folds the `changed` maps from iteration 0 onwards.
    ///
    /// # Panics
    /// If the trajectory does not start with an iteration-0 dump.
    pub fn replay(&self) -> Vec<Status> {
        replay(&self.iterations)
    }
}

/// Reconstructs statuses by applying every delta in order, starting from the iteration-0 dump.
pub fn replay(deltas: &[IterationDelta]) -> Vec<Status> {
    let first = deltas.first().expect("non-empty trajectory");
    assert_eq!(first.iteration, 0, "replay starts from the iteration-0 dump");
    let mut statuses = vec![0; first.changed.len()];
    for delta in deltas {
        for &(node, status) in &delta.changed {
            statuses[node as usize] = status;
        }
    }
    statuses
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_map_json_shape() {
        let d = IterationDelta {
            iteration: 3,
            changed: vec![(2, 1), (10, 0)],
            node_count: BTreeMap::from([(0, 5), (1, 7)]),
            status_delta: BTreeMap::from([(0, 1), (1, -1)]),
            time: None,
        };
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"{"iteration":3,"status":{"2":1,"10":0},"node_count":{"0":5,"1":7},"status_delta":{"0":1,"1":-1}}"#
        );
        let back: IterationDelta = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
