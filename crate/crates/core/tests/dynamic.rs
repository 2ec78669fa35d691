mod common;

use std::sync::Arc;

use netdiff_core::dyngraph::{PresenceInterval, SnapshotSequence, TemporalGraph};
use netdiff_core::engine::{child_seed, AttachedModel, ExecutionMode, ModelConfig, Simulation, Topology};
use netdiff_core::graph::{generators, Graph};

fn sim(topology: Topology, name: &str, cfg: ModelConfig, seed: u64) -> Simulation {
    Simulation::new(Arc::new(topology), name, cfg, seed).unwrap()
}

#[test]
fn contact_only_at_t5_infects_exactly_then() {
    let mut tg = TemporalGraph::new(false);
    // Activity elsewhere from t=1 fixes the observed domain at 1..=5.
    tg.add_interaction(2, 3, 1);
    tg.add_interaction(0, 1, 5);
    let cfg = ModelConfig::new().param("beta", 1.0).planted([(0, "Infected")]);
    let mut s = sim(tg.freeze().into(), "DynSI", cfg, 3);
    let deltas = s.iteration_bunch(6).unwrap();
    for d in &deltas[1..5] {
        assert!(d.changed.is_empty(), "iteration {} changed {:?}", d.iteration, d.changed);
    }
    assert_eq!(deltas[5].iteration, 5);
    assert_eq!(deltas[5].time, Some(5));
    assert_eq!(deltas[5].changed, vec![(1, 1)]);
}

#[test]
fn start_time_shifts_the_clock() {
    let mut tg = TemporalGraph::new(false);
    tg.add_interaction(0, 1, 5);
    let cfg = ModelConfig { start_time: Some(0), ..ModelConfig::new().param("beta", 1.0).planted([(0, "Infected")]) };
    let mut s = sim(tg.freeze().into(), "DynSI", cfg, 3);
    let deltas = s.iteration_bunch(7).unwrap();
    assert_eq!(deltas[6].time, Some(5));
    assert_eq!(deltas[6].changed, vec![(1, 1)]);
    assert!(s.iteration().is_err());
}

fn constant_temporal(g: &Graph, horizon: i64) -> TemporalGraph {
    let mut tg = TemporalGraph::new(false);
    let iv = PresenceInterval::new(0, horizon).unwrap();
    for (u, v) in g.edges() {
        tg.add_interval(u, v, iv);
    }
    for v in 0..g.node_count() as u32 {
        tg.add_node_presence(v, iv);
    }
    tg
}

#[test]
fn constant_graph_modes_agree() {
    for seed in 0..10 {
        let g = generators::erdos_renyi(80, 0.08, seed).unwrap();
        let tg = constant_temporal(&g, 20);
        let seq = tg.snapshots_of();
        let cfg = ModelConfig::new().param("beta", 0.1).param("gamma", 0.05).param("percentage_infected", 0.1);
        let mut a = sim(tg.clone().freeze().into(), "DynSIR", cfg.clone().with_mode(ExecutionMode::Interactions), seed);
        let mut b = sim(tg.freeze().into(), "DynSIR", cfg.clone().with_mode(ExecutionMode::Snapshots), seed);
        let mut c = sim(seq.into(), "DynSIR", cfg, seed);
        let da = a.iteration_bunch(21).unwrap();
        assert_eq!(da, b.iteration_bunch(21).unwrap());
        assert_eq!(da, c.iteration_bunch(21).unwrap());
    }
}

#[test]
fn identical_snapshots_reduce_to_static() {
    for seed in 0..5 {
        let g = generators::erdos_renyi(100, 0.05, seed).unwrap();
        let seq = SnapshotSequence::from_graphs((0..30).map(|i| (i, g.clone())).collect()).unwrap();
        let dyn_cfg = ModelConfig::new().param("beta", 0.1).param("lambda", 0.1).param("percentage_infected", 0.1);
        let mut d = sim(seq.into(), "DynSIS", dyn_cfg.clone(), seed);
        let mut s = sim(g.into(), "SIS", dyn_cfg, seed);
        let dd: Vec<_> = d.iteration_bunch(31).unwrap().into_iter().map(|mut x| {
            x.time = None;
            x
        }).collect();
        assert_eq!(dd, s.iteration_bunch(31).unwrap());
    }
}

#[test]
fn edgeless_snapshot_changes_nothing_for_si() {
    let seq = SnapshotSequence::from_graphs(vec![(0, Graph::empty(10, false))]).unwrap();
    let cfg = ModelConfig::new().param("beta", 1.0).param("percentage_infected", 0.5);
    let mut s = sim(seq.into(), "DynSI", cfg, 1);
    let d = s.iteration_bunch(2).unwrap();
    assert!(d[1].changed.is_empty());
}

#[test]
fn empty_slice_still_recovers() {
    let mut tg = TemporalGraph::new(false);
    tg.add_interaction(0, 1, 0);
    tg.add_interaction(2, 3, 3);
    let cfg = ModelConfig::new()
        .param("beta", 0.0)
        .param("gamma", 1.0)
        .with_mode(ExecutionMode::Interactions)
        .planted([(0, "Infected"), (2, "Infected")]);
    let mut s = sim(tg.freeze().into(), "DynSIR", cfg, 0);
    let d = s.iteration_bunch(3).unwrap();
    // t=1 has no contacts at all.
    assert_eq!(d[2].time, Some(1));
    assert_eq!(d[1].node_count[&2], 2);
}

#[test]
fn absent_nodes_keep_status() {
    let text = "# snapshot 0\n0 1\n1 2\n# snapshot 1\n0 1\n";
    let seq = SnapshotSequence::parse(text, false).unwrap();
    let cfg = ModelConfig::new().param("beta", 0.0).param("lambda", 1.0).planted([(2, "Infected")]);
    let mut s = sim(seq.into(), "DynSIS", cfg, 0);
    let d = s.iteration_bunch(3).unwrap();
    assert_eq!(d[1].changed, vec![(2, 0)]);
    let cfg = ModelConfig::new().param("beta", 0.0).param("lambda", 1.0).planted([(2, "Infected")]);
    let seq = SnapshotSequence::parse("# snapshot 0\n0 1\n# snapshot 1\n1 2\n", false).unwrap();
    let mut s = sim(seq.into(), "DynSIS", cfg, 0);
    let d = s.iteration_bunch(3).unwrap();
    // Node 2 is absent from snapshot 0: its infection is carried over untouched.
    assert!(d[1].changed.is_empty());
    assert_eq!(d[2].changed, vec![(2, 0)]);
}

#[test]
fn late_arrivals_start_susceptible() {
    let seq = SnapshotSequence::parse("# snapshot 0\n0 1\n# snapshot 1\n0 1\n2 3\n", false).unwrap();
    let cfg = ModelConfig::new().param("beta", 0.0).fraction("Infected", 1.0);
    for seed in 0..20 {
        let s = sim(seq.clone().into(), "DynSI", cfg.clone(), seed);
        assert_eq!(s.statuses(), &[1, 1, 0, 0]);
    }
}

#[test]
fn only_the_first_snapshot_path_can_infect() {
    // The only 0-1 contact is in snapshot 0: node 1 can be infected at iteration 1 or never.
    let seq = SnapshotSequence::from_graphs(vec![
        (0, Graph::from_edges(3, false, [(0, 1)])),
        (1, Graph::from_edges(3, false, [(0, 2)])),
        (2, Graph::empty(3, false)),
    ])
    .unwrap();
    let cfg = ModelConfig::new().param("beta", 0.5).planted([(0, "Infected")]);
    let m = AttachedModel::attach(Arc::new(seq.into()), "DynSI", cfg).unwrap();
    let reps = 20_000;
    let mut at_one = 0;
    for r in 0..reps {
        let mut st = m.initial_state(child_seed(5, r));
        let d = m.iteration_bunch(&mut st, 4).unwrap();
        let hit = d.iter().position(|x| x.iteration > 0 && x.changed.iter().any(|&(v, _)| v == 1));
        match hit {
            Some(1) => at_one += 1,
            None => {}
            Some(other) => panic!("node 1 infected at iteration {other}"),
        }
    }
    let p = at_one as f64 / reps as f64;
    assert!((p - 0.5).abs() < 3.0 * (0.25f64 / reps as f64).sqrt(), "{p}");
}

#[test]
fn mode_validation() {
    let g = generators::path(3);
    let cfg = ModelConfig::new().param("beta", 0.1);
    assert!(AttachedModel::attach(Arc::new(g.clone().into()), "DynSI", cfg.clone()).is_err());
    let seq = SnapshotSequence::from_graphs(vec![(0, g.clone())]).unwrap();
    assert!(AttachedModel::attach(Arc::new(seq.into()), "SI", cfg.clone()).is_err());
    let seq = SnapshotSequence::from_graphs(vec![(0, g)]).unwrap();
    let bad = cfg.with_mode(ExecutionMode::Interactions);
    assert!(AttachedModel::attach(Arc::new(seq.into()), "DynSI", bad).is_err());
}
