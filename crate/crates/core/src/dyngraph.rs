//! Dynamic topologies: temporal networks and snapshot sequences.
//!
//! A [`TemporalGraph`] stores each interaction as a sorted list of disjoint,
//! maximal half-open presence intervals `[start, end)`. Instantaneous
//! observations at integer timestamps are merged with adjacent ones, so
//! timestamps `1, 2, 3, 5, 6` compress to `[1, 4), [5, 7)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::{Graph, Labels, NodeId};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PresenceInterval {
    /// Inclusive.
    pub start: i64,
    /// Exclusive.
    pub end: i64,
}

impl PresenceInterval {
    pub fn new(start: i64, end: i64) -> Result<Self> {
        if start >= end {
            return Err(Error::param("interval", format!("[{start}, {end}) is empty")));
        }
        Ok(PresenceInterval { start, end })
    }

    pub fn instant(t: i64) -> Self {
        PresenceInterval { start: t, end: t + 1 }
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t < self.end
    }

    /// Whether the interval meets the half-open window `[from, to)`.
    pub fn intersects(&self, from: i64, to: i64) -> bool {
        self.start < to && from < self.end
    }
}

/// Inserts `iv` into a sorted, disjoint, maximal list, merging overlaps and
/// touching neighbours.
fn merge_interval(list: &mut Vec<PresenceInterval>, iv: PresenceInterval) {
    // First interval that could touch `iv` (its end reaches iv.start).
    let lo = list.partition_point(|x| x.end < iv.start);
    // One past the last interval that could touch `iv` (its start within iv.end).
    let hi = list.partition_point(|x| x.start <= iv.end);
    if lo == hi {
        list.insert(lo, iv);
        return;
    }
    let merged = PresenceInterval {
        start: iv.start.min(list[lo].start),
        end: iv.end.max(list[hi - 1].end),
    };
    list.splice(lo..hi, std::iter::once(merged));
}

fn covers(list: &[PresenceInterval], t: i64) -> bool {
    let i = list.partition_point(|x| x.end <= t);
    i < list.len() && list[i].contains(t)
}

#[derive(Clone, Debug, Default)]
pub struct TemporalGraph {
    directed: bool,
    labels: Option<Labels>,
    node_count: usize,
    interactions: BTreeMap<(NodeId, NodeId), Vec<PresenceInterval>>,
    lifetimes: Vec<Vec<PresenceInterval>>,
    timestamps: BTreeSet<i64>,
}

impl TemporalGraph {
    pub fn new(directed: bool) -> Self {
        TemporalGraph { directed, ..Default::default() }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn interaction_count(&self) -> usize {
        self.interactions.len()
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    /// Observed timestamp domain.
    pub fn timestamps(&self) -> &BTreeSet<i64> {
        &self.timestamps
    }

    fn key(&self, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
        if self.directed || u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }

    fn ensure_node(&mut self, v: NodeId) {
        let needed = v as usize + 1;
        if needed > self.node_count {
            self.node_count = needed;
            self.lifetimes.resize_with(needed, Vec::new);
        }
    }

    /// Records presence of `(u, v)` at timestamp `t`.
    pub fn add_interaction(&mut self, u: NodeId, v: NodeId, t: i64) {
        self.add_interval(u, v, PresenceInterval::instant(t));
    }

    /// Records presence of `(u, v)` throughout `iv`. Endpoints are created as
    /// needed and their lifetimes extended to cover `iv`.
    pub fn add_interval(&mut self, u: NodeId, v: NodeId, iv: PresenceInterval) {
        self.ensure_node(u);
        self.ensure_node(v);
        let key = self.key(u, v);
        merge_interval(self.interactions.entry(key).or_default(), iv);
        merge_interval(&mut self.lifetimes[u as usize], iv);
        merge_interval(&mut self.lifetimes[v as usize], iv);
        self.timestamps.extend(iv.start..iv.end);
    }

    /// Presence of a node independent of its interactions.
    pub fn add_node_presence(&mut self, v: NodeId, iv: PresenceInterval) {
        self.ensure_node(v);
        merge_interval(&mut self.lifetimes[v as usize], iv);
        self.timestamps.extend(iv.start..iv.end);
    }

    pub fn intervals(&self, u: NodeId, v: NodeId) -> Option<&[PresenceInterval]> {
        self.interactions.get(&self.key(u, v)).map(Vec::as_slice)
    }

    pub fn interactions(&self) -> impl Iterator<Item = ((NodeId, NodeId), &[PresenceInterval])> {
        self.interactions.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn node_lifetime(&self, v: NodeId) -> &[PresenceInterval] {
        self.lifetimes.get(v as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn node_present(&self, v: NodeId, t: i64) -> bool {
        covers(self.node_lifetime(v), t)
    }

    fn labelled(&self, g: Graph) -> Graph {
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => g,
        }
    }

    fn slice_unlabelled(&self, t: i64) -> Graph {
        let edges = self.interactions.iter().filter(|(_, ivs)| covers(ivs, t)).map(|(k, _)| *k);
        Graph::from_edges(self.node_count, self.directed, edges.collect::<Vec<_>>())
    }

    /// Static graph of the interactions alive at `t`, over the full node universe.
    pub fn slice(&self, t: i64) -> Graph {
        self.labelled(self.slice_unlabelled(t))
    }

    /// Union of interactions alive at some instant of `[from, to)`.
    pub fn flatten(&self, from: i64, to: i64) -> Result<Graph> {
        if from > to {
            return Err(Error::param("window", format!("t_from {from} > t_to {to}")));
        }
        let edges = self
            .interactions
            .iter()
            .filter(|(_, ivs)| ivs.iter().any(|iv| iv.intersects(from, to)))
            .map(|(k, _)| *k);
        Ok(self.labelled(Graph::from_edges(self.node_count, self.directed, edges.collect::<Vec<_>>())))
    }

    /// Flattening over the whole observed timestamp domain.
    pub fn flatten_all(&self) -> Graph {
        match (self.timestamps.first(), self.timestamps.last()) {
            (Some(&a), Some(&b)) => self.flatten(a, b + 1).expect("ordered window"),
            _ => self.labelled(Graph::empty(self.node_count, self.directed)),
        }
    }

    /// One snapshot per observed timestamp, each equal to [`TemporalGraph::slice`].
    /// A node is a member of a snapshot when its lifetime covers the timestamp.
    pub fn snapshots_of(&self) -> SnapshotSequence {
        let snapshots = self
            .timestamps
            .iter()
            .map(|&t| Snapshot {
                id: t,
                graph: self.slice_unlabelled(t),
                present: (0..self.node_count as NodeId).map(|v| self.node_present(v, t)).collect(),
            })
            .collect();
        SnapshotSequence {
            directed: self.directed,
            node_count: self.node_count,
            labels: self.labels.clone(),
            snapshots,
        }
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"temporal");
        h.update([self.directed as u8]);
        h.update((self.node_count as u64).to_le_bytes());
        for ((u, v), ivs) in &self.interactions {
            h.update(u.to_le_bytes());
            h.update(v.to_le_bytes());
            for iv in ivs {
                h.update(iv.start.to_le_bytes());
                h.update(iv.end.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Parses lines `u v t` (instant) or `u v t_start t_end` (half-open interval).
    /// `#` lines are comments.
    pub fn parse(text: &str, directed: bool) -> Result<Self> {
        let mut g = TemporalGraph::new(directed);
        let mut labels = Labels::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let time = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| Error::parse(idx + 1, format!("timestamp `{s}` is not an integer")))
            };
            let iv = match tokens.as_slice() {
                [_, _, t] => PresenceInterval::instant(time(t)?),
                [_, _, s, e] => PresenceInterval::new(time(s)?, time(e)?)
                    .map_err(|_| Error::parse(idx + 1, format!("empty interval [{s}, {e})")))?,
                _ => {
                    return Err(Error::parse(
                        idx + 1,
                        format!("expected `u v t` or `u v t_start t_end`, got `{line}`"),
                    ))
                }
            };
            let u = labels.intern(tokens[0]);
            let v = labels.intern(tokens[1]);
            if u == v {
                continue;
            }
            g.add_interval(u, v, iv);
        }
        g.labels = Some(labels);
        Ok(g)
    }

    /// Serialises to `u v t_start t_end` lines using original labels.
    pub fn to_text(&self) -> String {
        let name = |v: NodeId| match self.labels.as_ref().and_then(|l| l.name(v)) {
            Some(s) => s.to_owned(),
            None => v.to_string(),
        };
        let mut out = String::new();
        for ((u, v), ivs) in &self.interactions {
            for iv in ivs {
                let _ = writeln!(out, "{} {} {} {}", name(*u), name(*v), iv.start, iv.end);
            }
        }
        out
    }

    /// Freezes the graph for simulation, materialising one slice per timestamp.
    pub fn freeze(self) -> FrozenTemporalGraph {
        let slices = self.timestamps.iter().map(|&t| (t, self.slice_unlabelled(t))).collect();
        let empty = Graph::empty(self.node_count, self.directed);
        FrozenTemporalGraph { graph: self, slices, empty }
    }
}

/// Immutable temporal graph with precomputed per-timestamp slices. Safe to
/// share across concurrently running simulations.
#[derive(Clone, Debug)]
pub struct FrozenTemporalGraph {
    graph: TemporalGraph,
    slices: BTreeMap<i64, Graph>,
    empty: Graph,
}

impl FrozenTemporalGraph {
    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    /// Contacts at `t`; timestamps outside the domain give an edgeless graph.
    pub fn slice_at(&self, t: i64) -> &Graph {
        self.slices.get(&t).unwrap_or(&self.empty)
    }

    pub fn first_timestamp(&self) -> Option<i64> {
        self.graph.timestamps.first().copied()
    }

    pub fn last_timestamp(&self) -> Option<i64> {
        self.graph.timestamps.last().copied()
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub id: i64,
    pub graph: Graph,
    /// Node membership `V_i` of this snapshot.
    pub present: Vec<bool>,
}

/// Ordered sequence of static graphs over a shared node universe.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotSequence {
    directed: bool,
    node_count: usize,
    labels: Option<Labels>,
    snapshots: Vec<Snapshot>,
}

/// Snapshot id, its edges and the nodes it lists explicitly.
type Section = (i64, Vec<(NodeId, NodeId)>, BTreeSet<NodeId>);

impl SnapshotSequence {
    /// Builds a sequence from `(id, graph)` pairs. Ids must be strictly
    /// increasing and all graphs share directedness. Graphs are padded to the
    /// largest node count; nodes beyond a graph's own count are absent from it.
    pub fn from_graphs(graphs: Vec<(i64, Graph)>) -> Result<Self> {
        if graphs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::param("snapshots", "snapshot ids must be strictly increasing"));
        }
        let directed = graphs.first().map(|(_, g)| g.is_directed()).unwrap_or(false);
        if graphs.iter().any(|(_, g)| g.is_directed() != directed) {
            return Err(Error::param("snapshots", "mixed directed and undirected snapshots"));
        }
        let node_count = graphs.iter().map(|(_, g)| g.node_count()).max().unwrap_or(0);
        let snapshots = graphs
            .into_iter()
            .map(|(id, g)| {
                let own = g.node_count();
                Snapshot { id, graph: g.padded(node_count), present: (0..node_count).map(|v| v < own).collect() }
            })
            .collect();
        Ok(SnapshotSequence { directed, node_count, labels: None, snapshots })
    }

    /// Parses edge-list sections introduced by `# snapshot <id>` lines. A node
    /// is a member of a snapshot when it appears in that snapshot's section.
    pub fn parse(text: &str, directed: bool) -> Result<Self> {
        let mut labels = Labels::new();
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("snapshot") {
                    let id = parts
                        .next()
                        .and_then(|s| s.parse::<i64>().ok())
                        .ok_or_else(|| Error::parse(idx + 1, "`# snapshot` expects an integer id"))?;
                    if sections.last().is_some_and(|(last, _, _)| *last >= id) {
                        return Err(Error::parse(idx + 1, format!("snapshot id {id} is not increasing")));
                    }
                    sections.push((id, Vec::new(), BTreeSet::new()));
                }
                continue;
            }
            let Some((_, edges, members)) = sections.last_mut() else {
                return Err(Error::parse(idx + 1, "edge before the first `# snapshot` header"));
            };
            let mut tokens = line.split_whitespace();
            let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
                return Err(Error::parse(idx + 1, format!("expected two node tokens, got `{line}`")));
            };
            let (u, v) = (labels.intern(a), labels.intern(b));
            members.insert(u);
            members.insert(v);
            edges.push((u, v));
        }
        let n = labels.len();
        let snapshots = sections
            .into_iter()
            .map(|(id, edges, members)| {
                let mut present = vec![false; n];
                for m in members {
                    present[m as usize] = true;
                }
                Snapshot { id, graph: Graph::from_edges(n, directed, edges), present }
            })
            .collect();
        Ok(SnapshotSequence { directed, node_count: n, labels: Some(labels), snapshots })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.snapshots {
            let _ = writeln!(out, "# snapshot {}", s.id);
            for (u, v) in s.graph.edges() {
                let _ = writeln!(out, "{} {}", self.label(u), self.label(v));
            }
        }
        out
    }

    fn label(&self, v: NodeId) -> String {
        match self.labels.as_ref().and_then(|l| l.name(v)) {
            Some(s) => s.to_owned(),
            None => v.to_string(),
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&Snapshot> {
        self.snapshots.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Snapshot> {
        self.snapshots.iter()
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"snapshots");
        for s in &self.snapshots {
            h.update(s.id.to_le_bytes());
            s.graph.feed_digest(&mut h);
            h.update(s.present.iter().map(|&p| p as u8).collect::<Vec<_>>());
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: i64, e: i64) -> PresenceInterval {
        PresenceInterval::new(s, e).unwrap()
    }

    #[test]
    fn unit_timestamps_compress() {
        let mut g = TemporalGraph::new(false);
        for t in [1, 2, 3, 5, 6] {
            g.add_interaction(0, 1, t);
        }
        assert_eq!(g.intervals(0, 1).unwrap(), &[iv(1, 4), iv(5, 7)]);
        assert_eq!(g.intervals(1, 0).unwrap(), &[iv(1, 4), iv(5, 7)]);
    }

    #[test]
    fn single_and_gapped() {
        let mut g = TemporalGraph::new(false);
        g.add_interaction(0, 1, 9);
        assert_eq!(g.intervals(0, 1).unwrap(), &[iv(9, 10)]);
        let mut g = TemporalGraph::new(false);
        g.add_interaction(0, 1, 1);
        g.add_interaction(0, 1, 3);
        assert_eq!(g.intervals(0, 1).unwrap(), &[iv(1, 2), iv(3, 4)]);
        g.add_interaction(0, 1, 2);
        assert_eq!(g.intervals(0, 1).unwrap(), &[iv(1, 4)]);
    }

    #[test]
    fn overlapping_intervals_merge() {
        let mut list = Vec::new();
        merge_interval(&mut list, iv(5, 8));
        merge_interval(&mut list, iv(1, 3));
        merge_interval(&mut list, iv(10, 12));
        merge_interval(&mut list, iv(2, 11));
        assert_eq!(list, vec![iv(1, 12)]);
        assert!(PresenceInterval::new(3, 3).is_err());
    }

    #[test]
    fn half_open_slice() {
        let mut g = TemporalGraph::new(false);
        g.add_interval(0, 1, iv(1, 4));
        assert!(g.slice(3).has_edge(0, 1));
        assert!(!g.slice(4).has_edge(0, 1));
        assert_eq!(TemporalGraph::new(false).slice(3).edge_count(), 0);
    }

    #[test]
    fn flatten_window() {
        let mut g = TemporalGraph::new(false);
        g.add_interval(0, 1, iv(1, 3));
        g.add_interval(1, 2, iv(5, 6));
        assert_eq!(g.flatten(0, 10).unwrap().edge_count(), 2);
        assert_eq!(g.flatten(3, 5).unwrap().edge_count(), 0);
        assert_eq!(g.flatten(4, 4).unwrap().edge_count(), 0);
        assert!(g.flatten(5, 4).is_err());
    }

    #[test]
    fn directed_pairs_are_distinct() {
        let mut g = TemporalGraph::new(true);
        g.add_interaction(0, 1, 1);
        g.add_interaction(1, 0, 3);
        assert_eq!(g.interaction_count(), 2);
        assert!(g.slice(1).has_edge(0, 1));
        assert!(!g.slice(1).has_edge(1, 0));
    }

    #[test]
    fn snapshots_follow_timestamps() {
        let mut g = TemporalGraph::new(false);
        g.add_interaction(0, 1, 1);
        g.add_interaction(0, 1, 2);
        g.add_interaction(1, 2, 2);
        let seq = g.snapshots_of();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.get(0).unwrap().graph.edge_count(), 1);
        assert_eq!(seq.get(1).unwrap().graph.edge_count(), 2);
        assert!(!seq.get(0).unwrap().present[2]);
        assert!(seq.get(1).unwrap().present[2]);
    }

    #[test]
    fn parse_instants_and_intervals() {
        let g = TemporalGraph::parse("# c\na b 1\na b 2\nb c 4 7\n", false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.intervals(0, 1).unwrap(), &[iv(1, 3)]);
        assert_eq!(g.intervals(1, 2).unwrap(), &[iv(4, 7)]);
        assert_eq!(g.timestamps().iter().copied().collect::<Vec<_>>(), vec![1, 2, 4, 5, 6]);
        assert!(matches!(TemporalGraph::parse("a b", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(TemporalGraph::parse("a b x", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(TemporalGraph::parse("a b 3 3", false), Err(Error::Parse { line: 1, .. })));
        let again = TemporalGraph::parse(&g.to_text(), false).unwrap();
        assert_eq!(again.digest(), g.digest());
    }

    #[test]
    fn snapshot_file_sections() {
        let text = "# snapshot 0\na b\nb c\n# snapshot 3\na c\n";
        let seq = SnapshotSequence::parse(text, false).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.node_count(), 3);
        assert_eq!(seq.get(1).unwrap().id, 3);
        assert!(!seq.get(1).unwrap().present[1]);
        assert!(SnapshotSequence::parse("a b\n", false).is_err());
        assert!(SnapshotSequence::parse("# snapshot 2\n# snapshot 1\n", false).is_err());
        assert_eq!(SnapshotSequence::parse(&seq.to_text(), false).unwrap(), seq);
    }

    #[test]
    fn from_graphs_pads_and_orders() {
        let a = Graph::from_edges(2, false, [(0, 1)]);
        let b = Graph::from_edges(4, false, [(2, 3)]);
        let seq = SnapshotSequence::from_graphs(vec![(0, a.clone()), (1, b.clone())]).unwrap();
        assert_eq!(seq.node_count(), 4);
        assert_eq!(seq.get(0).unwrap().present, vec![true, true, false, false]);
        assert!(SnapshotSequence::from_graphs(vec![(1, a), (1, b)]).is_err());
    }

    #[test]
    fn frozen_slices_match() {
        let mut g = TemporalGraph::new(false);
        g.add_interval(0, 1, iv(2, 4));
        let expected = g.slice(3);
        let frozen = g.freeze();
        assert_eq!(frozen.slice_at(3), &expected);
        assert_eq!(frozen.slice_at(100).edge_count(), 0);
        assert_eq!(frozen.first_timestamp(), Some(2));
    }
}
