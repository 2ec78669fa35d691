//! Brute-force outcome enumeration for one synchronous step on tiny instances,
//! and the Monte Carlo harness that compares the engine against it.
//!
//! The enumerations model every contact as its own independent trial, which is
//! how the model definitions are phrased; the engine instead inverts a single
//! uniform per node. Agreement between the two is the point of the check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use netdiff_core::engine::{child_seed, AttachedModel, ModelConfig, Topology};
use netdiff_core::graph::{generators, Graph, NodeId};

pub type Outcome = Vec<u8>;

/// One independent trial's effect on an outcome.
pub type Effect = dyn Fn(&mut Vec<u8>);

pub struct Row {
    pub outcome: Outcome,
    pub expected: f64,
    pub observed: f64,
    /// Three standard errors of the empirical frequency.
    pub tolerance: f64,
}

impl Row {
    pub fn ok(&self) -> bool {
        (self.observed - self.expected).abs() <= self.tolerance
    }
}

pub struct OracleReport {
    pub name: String,
    pub reps: usize,
    pub rows: Vec<Row>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(Row::ok)
    }

    /// Largest deviation in units of the standard error.
    pub fn worst_z(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                let sigma = r.tolerance / 3.0;
                if sigma == 0.0 {
                    if r.observed == r.expected { 0.0 } else { f64::INFINITY }
                } else {
                    (r.observed - r.expected).abs() / sigma
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> String {
        format!("{} outcomes, {} reps, worst |z| = {:.2}", self.rows.len(), self.reps, self.worst_z())
    }
}

/// Statuses after iteration 1, tallied over `reps` independently seeded runs.
pub fn one_step_frequencies(model: &AttachedModel, reps: usize, base_seed: u64) -> BTreeMap<Outcome, usize> {
    let mut hist = BTreeMap::new();
    for r in 0..reps {
        let mut state = model.initial_state(child_seed(base_seed, r as u64));
        model.iteration(&mut state).unwrap();
        model.iteration(&mut state).unwrap();
        *hist.entry(state.statuses).or_insert(0) += 1;
    }
    hist
}

pub fn compare(name: &str, oracle: &BTreeMap<Outcome, f64>, observed: &BTreeMap<Outcome, usize>, reps: usize) -> OracleReport {
    let total: f64 = oracle.values().sum();
    assert!((total - 1.0).abs() < 1e-9, "{name}: oracle mass {total}");
    let keys: BTreeSet<&Outcome> = oracle.keys().chain(observed.keys()).collect();
    let rows = keys
        .into_iter()
        .map(|k| {
            let p = oracle.get(k).copied().unwrap_or(0.0);
            let obs = observed.get(k).copied().unwrap_or(0) as f64 / reps as f64;
            Row { outcome: k.clone(), expected: p, observed: obs, tolerance: 3.0 * (p * (1.0 - p) / reps as f64).sqrt() }
        })
        .collect();
    OracleReport { name: name.to_owned(), reps, rows }
}

/// Adds `p` to every outcome produced by enumerating independent Bernoulli
/// trials: `trials[i] = (probability, effect)`, with effects applied in order
/// to a copy of `base` for each success.
fn enumerate_bernoulli(
    base: &[u8],
    trials: &[(f64, &Effect)],
    out: &mut BTreeMap<Outcome, f64>,
) {
    for mask in 0u32..(1 << trials.len()) {
        let mut p = 1.0;
        let mut st = base.to_vec();
        for (i, (prob, effect)) in trials.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p *= prob;
                effect(&mut st);
            } else {
                p *= 1.0 - prob;
            }
        }
        *out.entry(st).or_insert(0.0) += p;
    }
}

fn model(graph: Graph, name: &str, cfg: ModelConfig) -> AttachedModel {
    AttachedModel::attach(Arc::new(Topology::Static(graph)), name, cfg).unwrap()
}

/// SI on the star K(1,4) with the hub infected: each leaf faces one trial.
pub fn si_star_hub(beta: f64, reps: usize, seed: u64) -> OracleReport {
    let m = model(generators::star(4), "SI", ModelConfig::new().param("beta", beta).planted([(0, "Infected")]));
    compare("SI star, hub infected", &si_star_hub_oracle(beta), &one_step_frequencies(&m, reps, seed), reps)
}

pub fn si_star_hub_oracle(beta: f64) -> BTreeMap<Outcome, f64> {
    let base = vec![1, 0, 0, 0, 0];
    let effects: Vec<Box<Effect>> =
        (1..=4).map(|leaf| Box::new(move |st: &mut Vec<u8>| st[leaf] = 1) as Box<Effect>).collect();
    let trials: Vec<(f64, &Effect)> = effects.iter().map(|e| (beta, e.as_ref())).collect();
    let mut oracle = BTreeMap::new();
    enumerate_bernoulli(&base, &trials, &mut oracle);
    oracle
}

/// SI on K(1,4) with all leaves infected: the hub faces four contact trials.
pub fn si_star_leaves(beta: f64, reps: usize, seed: u64) -> OracleReport {
    let cfg = ModelConfig::new().param("beta", beta).planted((1..=4).map(|v| (v, "Infected")));
    let m = model(generators::star(4), "SI", cfg);
    let base = vec![0, 1, 1, 1, 1];
    let infect_hub = |st: &mut Vec<u8>| st[0] = 1;
    let trials: Vec<(f64, &Effect)> = (0..4).map(|_| (beta, &infect_hub as &Effect)).collect();
    let mut oracle = BTreeMap::new();
    enumerate_bernoulli(&base, &trials, &mut oracle);
    compare("SI star, leaves infected", &oracle, &one_step_frequencies(&m, reps, seed), reps)
}

/// SIR on a single edge, S-I: infection trial and removal trial are independent.
pub fn sir_pair(beta: f64, gamma: f64, reps: usize, seed: u64) -> OracleReport {
    let cfg = ModelConfig::new().param("beta", beta).param("gamma", gamma).planted([(1, "Infected")]);
    let m = model(generators::path(2), "SIR", cfg);
    let infect = |st: &mut Vec<u8>| st[0] = 1;
    let remove = |st: &mut Vec<u8>| st[1] = 2;
    let trials: [(f64, &Effect); 2] = [(beta, &infect), (gamma, &remove)];
    let mut oracle = BTreeMap::new();
    enumerate_bernoulli(&[0, 1], &trials, &mut oracle);
    compare("SIR pair", &oracle, &one_step_frequencies(&m, reps, seed), reps)
}

/// SWIR on a single S-I contact: the contact yields I, W or nothing; the
/// infected end is removed.
pub fn swir_contact(kappa: f64, mu: f64, nu: f64, reps: usize, seed: u64) -> OracleReport {
    let cfg = ModelConfig::new().param("kappa", kappa).param("mu", mu).param("nu", nu).planted([(1, "Infected")]);
    let m = model(generators::path(2), "SWIR", cfg);
    // Status codes: S=0, W=1, I=2, R=3.
    let oracle = BTreeMap::from([(vec![2, 3], kappa), (vec![1, 3], mu), (vec![0, 3], 1.0 - kappa - mu)]);
    compare("SWIR single contact", &oracle, &one_step_frequencies(&m, reps, seed), reps)
}

/// Independent Cascades on a 3-leaf star from a freshly activated hub.
pub fn ic_star(p: f64, reps: usize, seed: u64) -> OracleReport {
    let cfg = ModelConfig::new().param("p", p).planted([(0, "Infected")]);
    let m = model(generators::star(3), "IndependentCascades", cfg);
    // The hub is spent after its attempts: status 2 regardless of outcomes.
    let base = vec![2, 0, 0, 0];
    let effects: Vec<Box<Effect>> =
        (1..=3).map(|leaf| Box::new(move |st: &mut Vec<u8>| st[leaf] = 1) as Box<Effect>).collect();
    let trials: Vec<(f64, &Effect)> = effects.iter().map(|e| (p, e.as_ref())).collect();
    let mut oracle = BTreeMap::new();
    enumerate_bernoulli(&base, &trials, &mut oracle);
    compare("Independent Cascades star", &oracle, &one_step_frequencies(&m, reps, seed), reps)
}

/// Majority Rule on K10 with nodes `0..positives` at +1: every r-subset is
/// equally likely and adopts its majority, ties to +1.
pub fn majority_complete(n: usize, r: usize, positives: usize, reps: usize, seed: u64) -> OracleReport {
    let cfg = ModelConfig::new().param("r", r as f64).planted((0..positives as NodeId).map(|v| (v, "Positive")));
    let m = model(generators::complete(n), "MajorityRule", cfg);
    let oracle = majority_oracle(n, r, positives);
    compare("Majority Rule complete graph", &oracle, &one_step_frequencies(&m, reps, seed), reps)
}

pub fn majority_oracle(n: usize, r: usize, positives: usize) -> BTreeMap<Outcome, f64> {
    let base: Vec<u8> = (0..n).map(|v| u8::from(v < positives)).collect();
    let mut groups = Vec::new();
    subsets(n, r, 0, &mut Vec::new(), &mut groups);
    let weight = 1.0 / groups.len() as f64;
    let mut oracle = BTreeMap::new();
    for g in &groups {
        let pos = g.iter().filter(|&&v| base[v] == 1).count();
        let opinion = u8::from(2 * pos >= r);
        let mut st = base.clone();
        for &v in g {
            st[v] = opinion;
        }
        *oracle.entry(st).or_insert(0.0) += weight;
    }
    oracle
}

pub fn subsets(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for v in from..n {
        cur.push(v);
        subsets(n, k, v + 1, cur, out);
        cur.pop();
    }
}

/// Mean of `f` under an oracle distribution.
pub fn expectation(oracle: &BTreeMap<Outcome, f64>, f: impl Fn(&Outcome) -> f64) -> f64 {
    oracle.iter().map(|(o, p)| p * f(o)).sum()
}
