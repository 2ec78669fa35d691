//! Static graph storage.
//!
//! A [`Graph`] is an immutable compressed-sparse-row adjacency over dense node
//! ids `0..node_count`. Undirected edges are stored once logically and exposed
//! from both endpoints. Directed graphs additionally keep the reverse (in-arc)
//! adjacency, since most models look at who *influences* a node.

pub mod generators;
mod io;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

pub use io::load_edge_list;

pub type NodeId = u32;

/// Bidirectional map between original node tokens and dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `token`, assigning the next dense id on first sight.
    pub fn intern(&mut self, token: &str) -> NodeId {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.names.len() as NodeId;
        self.names.push(token.to_owned());
        self.index.insert(token.to_owned(), id);
        id
    }

    pub fn id(&self, token: &str) -> Option<NodeId> {
        self.index.get(token).copied()
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Labels in id order.
    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Clone, Debug)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    fn build(n: usize, arcs: &[(NodeId, NodeId)]) -> Self {
        // `arcs` must be sorted by (source, target) and free of duplicates.
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.iter().map(|&(_, v)| v).collect();
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    directed: bool,
    node_count: usize,
    edge_count: usize,
    out: Csr,
    /// Reverse adjacency; `None` for undirected graphs where it equals `out`.
    incoming: Option<Csr>,
    labels: Option<Labels>,
    self_loops_dropped: usize,
}

impl Graph {
    pub fn empty(node_count: usize, directed: bool) -> Self {
        Self::from_edges(node_count, directed, std::iter::empty())
    }

    /// Builds a graph from an edge iterator. Self-loops are dropped (and
    /// counted), duplicate edges are collapsed. Endpoints must be `< node_count`.
    ///
    /// # Panics
    /// If an endpoint is out of range.
    pub fn from_edges<I>(node_count: usize, directed: bool, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut self_loops = 0usize;
        let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            assert!(
                (u as usize) < node_count && (v as usize) < node_count,
                "edge ({u}, {v}) out of range for {node_count} nodes"
            );
            if u == v {
                self_loops += 1;
                continue;
            }
            arcs.push((u, v));
            if !directed {
                arcs.push((v, u));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let edge_count = if directed { arcs.len() } else { arcs.len() / 2 };
        let out = Csr::build(node_count, &arcs);
        let incoming = directed.then(|| {
            let mut rev: Vec<(NodeId, NodeId)> = arcs.iter().map(|&(u, v)| (v, u)).collect();
            rev.sort_unstable();
            Csr::build(node_count, &rev)
        });
        Graph {
            directed,
            node_count,
            edge_count,
            out,
            incoming,
            labels: None,
            self_loops_dropped: self_loops,
        }
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        debug_assert!(labels.len() <= self.node_count);
        self.labels = Some(labels);
        self
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of logical edges (an undirected edge counts once).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of stored arcs: `edge_count` when directed, twice that otherwise.
    pub fn arc_count(&self) -> usize {
        self.out.targets.len()
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    /// Out-neighbours, sorted ascending.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.out.row(u)
    }

    /// Nodes with an arc into `u`, sorted ascending. Equals [`Graph::neighbors`]
    /// for undirected graphs.
    #[inline]
    pub fn in_neighbors(&self, u: NodeId) -> &[NodeId] {
        match &self.incoming {
            Some(csr) => csr.row(u),
            None => self.out.row(u),
        }
    }

    /// Range of slots of `u`'s in-neighbour list; used to align per-arc values.
    #[inline]
    pub fn in_slots(&self, u: NodeId) -> std::ops::Range<usize> {
        let csr = self.incoming.as_ref().unwrap_or(&self.out);
        csr.offsets[u as usize]..csr.offsets[u as usize + 1]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.neighbors(u).len()
    }

    pub fn in_degree(&self, u: NodeId) -> usize {
        self.in_neighbors(u).len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count as NodeId).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        (u as usize) < self.node_count && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Source node of the arc stored at `slot` of the out-adjacency.
    pub fn arc_source(&self, slot: usize) -> NodeId {
        // offsets is non-decreasing; the source is the last row starting at or before `slot`.
        (self.out.offsets.partition_point(|&o| o <= slot) - 1) as NodeId
    }

    pub fn arc_target(&self, slot: usize) -> NodeId {
        self.out.targets[slot]
    }

    /// Logical edges in ascending order; undirected edges are reported once as `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count as NodeId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| self.directed || u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    /// Original token for `id`; generated graphs use the decimal id.
    pub fn label(&self, id: NodeId) -> Cow<'_, str> {
        match self.labels.as_ref().and_then(|l| l.name(id)) {
            Some(name) => Cow::Borrowed(name),
            None => Cow::Owned(id.to_string()),
        }
    }

    /// Dense id for an original token.
    pub fn node_id(&self, token: &str) -> Option<NodeId> {
        match &self.labels {
            Some(labels) => labels.id(token),
            None => token.parse::<NodeId>().ok().filter(|&id| (id as usize) < self.node_count),
        }
    }

    /// Dense-id edge list. The leading `#! nodes` directive preserves the node
    /// count and id assignment when the text is loaded back.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count * 12 + 32);
        let _ = writeln!(out, "#! nodes {}", self.node_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Label sidecar: dense id -> original token.
    pub fn label_map(&self) -> Vec<String> {
        (0..self.node_count as NodeId).map(|i| self.label(i).into_owned()).collect()
    }

    /// SHA-256 over directedness, node count and the sorted dense edge list.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        self.feed_digest(&mut hasher);
        hex::encode(hasher.finalize())
    }

    pub(crate) fn feed_digest(&self, hasher: &mut Sha256) {
        hasher.update([self.directed as u8]);
        hasher.update((self.node_count as u64).to_le_bytes());
        for (u, v) in self.edges() {
            hasher.update(u.to_le_bytes());
            hasher.update(v.to_le_bytes());
        }
    }

    /// Rebuilds the graph over a larger node universe, keeping labels.
    pub fn padded(&self, node_count: usize) -> Graph {
        assert!(node_count >= self.node_count);
        if node_count == self.node_count {
            return self.clone();
        }
        let mut g = Graph::from_edges(node_count, self.directed, self.edges().collect::<Vec<_>>());
        g.labels = self.labels.clone();
        g
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.node_count == other.node_count
            && self.out.offsets == other.out.offsets
            && self.out.targets == other.out.targets
    }
}

impl Eq for Graph {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_symmetry_and_dedup() {
        let g = Graph::from_edges(4, false, [(0, 1), (1, 0), (1, 2), (2, 2), (1, 2)]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.self_loops_dropped(), 1);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.in_neighbors(1), &[0, 2]);
        assert!(g.has_edge(2, 1));
        assert_eq!(g.degree(3), 0);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn directed_keeps_reverse_adjacency() {
        let g = Graph::from_edges(3, true, [(0, 1), (2, 1), (1, 0)]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(1), &[0]);
        assert_eq!(g.in_neighbors(1), &[0, 2]);
        assert_eq!(g.in_slots(1).len(), 2);
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn arc_source_lookup() {
        let g = Graph::from_edges(5, false, [(0, 1), (0, 2), (3, 4)]);
        for slot in 0..g.arc_count() {
            let u = g.arc_source(slot);
            assert!(g.neighbors(u).contains(&g.arc_target(slot)));
        }
        assert_eq!(g.arc_source(0), 0);
        assert_eq!(g.arc_source(g.arc_count() - 1), 4);
    }

    #[test]
    fn digest_depends_on_edges() {
        let a = Graph::from_edges(3, false, [(0, 1)]);
        let b = Graph::from_edges(3, false, [(1, 0)]);
        let c = Graph::from_edges(3, false, [(1, 2)]);
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn padding_keeps_edges() {
        let g = Graph::from_edges(3, false, [(0, 1), (1, 2)]);
        let p = g.padded(6);
        assert_eq!(p.node_count(), 6);
        assert_eq!(p.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}
