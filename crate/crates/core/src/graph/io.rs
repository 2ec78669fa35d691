use super::{Graph, Labels, NodeId};
use crate::{Error, Result};

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` are comments. Tokens are mapped to dense ids in
/// first-seen order; tokens after the second on a line are ignored. The
/// directive `#! nodes N` (as written by [`Graph::to_edge_list`]) pre-registers
/// tokens `"0".."N-1"` so dense-id round trips keep isolated nodes and ids.
pub fn load_edge_list(text: &str, directed: bool) -> Result<Graph> {
    let mut labels = Labels::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#!") {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("nodes") {
                let n: usize = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(idx + 1, "`#! nodes` expects a count"))?;
                for i in 0..n {
                    labels.intern(&i.to_string());
                }
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::parse(idx + 1, format!("expected two node tokens, got `{line}`")));
        };
        let u = labels.intern(a);
        let v = labels.intern(b);
        edges.push((u, v));
    }
    let n = labels.len();
    Ok(Graph::from_edges(n, directed, edges).with_labels(labels))
}
