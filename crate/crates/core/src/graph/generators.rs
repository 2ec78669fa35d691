//! Seeded synthetic graph generators. All produce undirected graphs and are
//! deterministic for a fixed seed.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId};
use crate::{Error, Result};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(name, format!("{p} is not a probability in [0, 1]")));
    }
    Ok(())
}

/// G(n, p): every unordered pair is present independently with probability `p`.
///
/// Uses geometric skipping over the pair sequence, so the cost is linear in the
/// number of generated edges rather than quadratic in `n`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n as NodeId {
            for w in 0..v {
                edges.push((w, v));
            }
        }
    } else if p > 0.0 && n > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (i64, i64) = (1, -1);
        let n = n as i64;
        while v < n {
            let r: f64 = rng.gen();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v && v < n {
                w -= v;
                v += 1;
            }
            if v < n {
                edges.push((w as NodeId, v as NodeId));
            }
        }
    }
    Ok(Graph::from_edges(n, false, edges))
}

/// Preferential attachment. Starts from a star on `m + 1` nodes; every later
/// node attaches to `m` distinct existing nodes chosen proportionally to degree.
/// The result has exactly `m * (n - m)` edges.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m < 1 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if m >= n {
        return Err(Error::param("m", format!("must be smaller than n ({m} >= {n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m * (n - m));
    // Every edge endpoint once: sampling uniformly from here is degree-proportional.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * m * (n - m));
    for leaf in 1..=m as NodeId {
        edges.push((0, leaf));
        endpoints.extend([0, leaf]);
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for new in (m + 1) as NodeId..n as NodeId {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.extend([t, new]);
        }
    }
    Ok(Graph::from_edges(n, false, edges))
}

/// Small-world ring lattice: each node joins its `k / 2` nearest neighbours on
/// both sides, then every lattice edge `(u, u + j)` is rewired with probability
/// `beta` to `(u, w)` for a uniform `w` that keeps the graph simple.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph> {
    check_probability("beta", beta)?;
    if !k.is_multiple_of(2) {
        return Err(Error::param("k", format!("must be even, got {k}")));
    }
    if k >= n {
        return Err(Error::param("k", format!("must be smaller than n ({k} >= {n})")));
    }
    let mut adj: Vec<HashSet<NodeId>> = vec![HashSet::with_capacity(k); n];
    let mut lattice = Vec::with_capacity(n * k / 2);
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v as NodeId);
            adj[v].insert(u as NodeId);
            lattice.push((u as NodeId, v as NodeId));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if beta > 0.0 {
        for &(u, v) in &lattice {
            if !adj[u as usize].contains(&v) || rng.gen::<f64>() >= beta {
                continue;
            }
            if adj[u as usize].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n) as NodeId;
                if w != u && !adj[u as usize].contains(&w) {
                    break w;
                }
            };
            adj[u as usize].remove(&v);
            adj[v as usize].remove(&u);
            adj[u as usize].insert(w);
            adj[w as usize].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, set)| set.iter().filter(move |&&v| (u as NodeId) < v).map(move |&v| (u as NodeId, v)))
        .collect::<Vec<_>>();
    Ok(Graph::from_edges(n, false, edges))
}

/// Complete graph on `n` nodes.
pub fn complete(n: usize) -> Graph {
    let edges = (0..n as NodeId).flat_map(|u| (u + 1..n as NodeId).map(move |v| (u, v)));
    Graph::from_edges(n, false, edges.collect::<Vec<_>>())
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, false, (1..=leaves as NodeId).map(|l| (0, l)).collect::<Vec<_>>())
}

/// Cycle `0 - 1 - ... - (n-1) - 0`.
pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, false, (0..n as NodeId).map(|u| (u, ((u as usize + 1) % n) as NodeId)).collect::<Vec<_>>())
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, false, (1..n as NodeId).map(|u| (u - 1, u)).collect::<Vec<_>>())
}

/// Builds a generator by name, as used by configuration documents and the REST API.
///
/// Recognised names: `erdos_renyi {n, p}`, `barabasi_albert {n, m}`,
/// `watts_strogatz {n, k, p}` (`beta` is accepted for `p`), `complete {n}`,
/// `star {n}` (leaves), `cycle {n}`, `path {n}`.
pub fn by_name(name: &str, params: &serde_json::Map<String, serde_json::Value>, seed: u64) -> Result<Graph> {
    let get = |key: &str| -> Result<f64> {
        params
            .get(key)
            .and_then(serde_json::Value::as_f64)
            .ok_or_else(|| Error::param(key, format!("generator `{name}` requires numeric `{key}`")))
    };
    let count = |key: &str| -> Result<usize> {
        let v = get(key)?;
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(Error::param(key, format!("expected a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    };
    match name {
        "erdos_renyi" => erdos_renyi(count("n")?, get("p")?, seed),
        "barabasi_albert" => barabasi_albert(count("n")?, count("m")?, seed),
        "watts_strogatz" => {
            let beta = get("p").or_else(|_| get("beta"))?;
            watts_strogatz(count("n")?, count("k")?, beta, seed)
        }
        "complete" => Ok(complete(count("n")?)),
        "star" => Ok(star(count("n")?)),
        "cycle" => Ok(cycle(count("n")?)),
        "path" => Ok(path(count("n")?)),
        other => Err(Error::param("generator", format!("unknown generator `{other}`"))),
    }
}

/// Names accepted by [`by_name`].
pub const GENERATORS: &[&str] = &["erdos_renyi", "barabasi_albert", "watts_strogatz", "complete", "star", "cycle", "path"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(erdos_renyi(50, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(50, 1.0, 1).unwrap().edge_count(), 50 * 49 / 2);
        assert!(erdos_renyi(5, 1.5, 1).is_err());
        assert!(erdos_renyi(5, -0.1, 1).is_err());
        assert_eq!(erdos_renyi(0, 0.5, 1).unwrap().node_count(), 0);
    }

    #[test]
    fn ba_small_tree() {
        let g = barabasi_albert(10, 1, 3).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(barabasi_albert(5, 5, 0).is_err());
        assert!(barabasi_albert(5, 0, 0).is_err());
    }

    #[test]
    fn ws_lattice_and_count() {
        let g = watts_strogatz(20, 4, 0.0, 9).unwrap();
        assert!((0..20).all(|u| g.degree(u) == 4));
        for beta in [0.0, 0.1, 0.5, 1.0] {
            assert_eq!(watts_strogatz(20, 4, beta, 5).unwrap().edge_count(), 40);
        }
        assert!(watts_strogatz(20, 3, 0.1, 1).is_err());
        assert!(watts_strogatz(4, 4, 0.1, 1).is_err());
    }

    #[test]
    fn by_name_dispatch() {
        let params = serde_json::json!({"n": 100, "p": 0.1}).as_object().unwrap().clone();
        assert_eq!(by_name("erdos_renyi", &params, 3).unwrap().node_count(), 100);
        assert!(by_name("nope", &params, 3).is_err());
        assert!(by_name("barabasi_albert", &params, 3).is_err());
    }
}
