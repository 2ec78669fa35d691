mod common;

use std::sync::Arc;

use netdiff_core::analytics::{self, aggregate_series, compare, nearest_rank, Column, Series, SeriesKind};
use netdiff_core::engine::{multi_runs, replay, ModelConfig, Simulation};
use netdiff_core::graph::generators;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{attach, example, topology_for};

#[test]
fn trend_matches_replayed_counts() {
    for (i, name) in ["SIR", "SEIR", "Voter", "KerteszThreshold", "SWIR"].into_iter().enumerate() {
        let topo = topology_for(name, 150, 0.05, 0, i as u64);
        let mut sim = Simulation::new(topo, name, example(name), i as u64).unwrap();
        sim.iteration_bunch(60).unwrap();
        let traj = sim.trajectory();
        let trend = analytics::trend(&traj);
        for (row, _) in traj.iterations.iter().enumerate() {
            let statuses = replay(&traj.iterations[..=row]);
            for (code, col) in trend.columns.iter().enumerate() {
                let count = statuses.iter().filter(|&&s| s as usize == code).count() as i64;
                assert_eq!(col.values[row], count, "{name} row {row} {}", col.status);
            }
        }
    }
}

#[test]
fn fixpoint_gives_constant_lines_and_zero_prevalence() {
    let g = generators::erdos_renyi(100, 0.05, 1).unwrap();
    let cfg = ModelConfig::new().param("threshold", 1.0).param("percentage_infected", 0.1);
    let mut sim = Simulation::new(Arc::new(g.into()), "Threshold", cfg, 1).unwrap();
    sim.iteration_bunch(20).unwrap();
    let traj = sim.trajectory();
    let trend = analytics::trend(&traj);
    for col in &trend.columns {
        assert!(col.values.windows(2).all(|w| w[0] == w[1]));
    }
    let prev = analytics::prevalence(&traj);
    assert_eq!(prev.len(), 19);
    assert!(prev.columns.iter().all(|c| c.values.iter().all(|&v| v == 0)));
}

#[test]
fn sir_removed_never_decreases() {
    let topo = topology_for("SIR", 300, 0.03, 0, 2);
    let mut sim = Simulation::new(topo, "SIR", example("SIR"), 2).unwrap();
    sim.iteration_bunch(100).unwrap();
    let trend = analytics::trend(&sim.trajectory());
    let r = trend.column("Removed").unwrap();
    assert!(r.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn single_series_comparison_is_passthrough() {
    let topo = topology_for("SIS", 100, 0.05, 0, 3);
    let mut sim = Simulation::new(topo, "SIS", example("SIS"), 3).unwrap();
    sim.iteration_bunch(30).unwrap();
    let trend = analytics::trend(&sim.trajectory());
    let cmp = compare(&[("only", &trend)], None).unwrap();
    assert_eq!(cmp.iterations, trend.iterations);
    for ((name, values), col) in cmp.columns.iter().zip(&trend.columns) {
        assert_eq!(name, &format!("only:{}", col.status));
        assert_eq!(values.iter().map(|v| v.unwrap()).collect::<Vec<_>>(), col.values);
    }
}

#[test]
fn si_saturates_while_sir_peaks_and_decays() {
    let g = Arc::new(generators::erdos_renyi(1000, 0.01, 5).unwrap().into());
    let si = attach("SI", Arc::clone(&g), ModelConfig::new().param("beta", 0.02).param("percentage_infected", 0.05));
    let sir = attach(
        "SIR",
        g,
        ModelConfig::new().param("beta", 0.02).param("gamma", 0.05).param("percentage_infected", 0.05),
    );
    let si_band = analytics::aggregate_runs(&multi_runs(&si, 200, 10, None, 1).unwrap(), 25.0, 75.0).unwrap();
    let sir_band = analytics::aggregate_runs(&multi_runs(&sir, 200, 10, None, 1).unwrap(), 25.0, 75.0).unwrap();
    let median = |b: &analytics::BandedSeries| b.band("Infected").unwrap().median.clone();
    let series = |b: &analytics::BandedSeries| Series {
        kind: SeriesKind::Trend,
        iterations: b.iterations.clone(),
        columns: vec![Column { status: "Infected".into(), values: median(b) }],
    };
    let (a, b) = (series(&si_band), series(&sir_band));
    let cmp = compare(&[("SI", &a), ("SIR", &b)], Some(&["Infected"])).unwrap();
    assert!(cmp.to_csv().starts_with("iteration,SI:Infected,SIR:Infected\n"));

    let si_i = median(&si_band);
    assert!(si_i.windows(2).all(|w| w[0] <= w[1]), "SI infected must be non-decreasing");
    assert!(*si_i.last().unwrap() >= 990, "SI should saturate, got {}", si_i.last().unwrap());
    assert!(si_i[190..].iter().all(|&v| v == si_i[199]));

    let sir_i = median(&sir_band);
    let peak = (0..sir_i.len()).max_by_key(|&i| sir_i[i]).unwrap();
    assert!(peak > 0 && peak < sir_i.len() - 1);
    assert!(sir_i[peak] > 2 * sir_i[0]);
    assert!(*sir_i.last().unwrap() < sir_i[peak] / 4);
    // Unimodal up to sampling noise of a few nodes.
    let slack = 10;
    assert!(sir_i[..=peak].windows(2).all(|w| w[1] + slack >= w[0]));
    assert!(sir_i[peak..].windows(2).all(|w| w[1] <= w[0] + slack));
}

#[test]
fn banded_percentiles_match_sort_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let runs: Vec<Series> = (0..100)
        .map(|_| Series {
            kind: SeriesKind::Trend,
            iterations: (0..30).collect(),
            columns: vec![Column { status: "X".into(), values: (0..30).map(|i| rng.gen_range(0..=(i * 10 + 5))).collect() }],
        })
        .collect();
    let banded = aggregate_series(&runs, 10.0, 90.0).unwrap();
    for row in 0..30 {
        let mut col: Vec<i64> = runs.iter().map(|s| s.columns[0].values[row]).collect();
        col.sort();
        // With 100 runs, nearest-rank p is the ceil(p)-th smallest value.
        assert_eq!(banded.bands[0].lower[row], col[9]);
        assert_eq!(banded.bands[0].median[row], col[49]);
        assert_eq!(banded.bands[0].upper[row], col[89]);
        assert_eq!(nearest_rank(&col, 90.0), col[89]);
    }
    assert_eq!(banded.central, "median");
}

#[test]
fn single_or_identical_runs_give_zero_width_bands() {
    let topo = topology_for("SIR", 100, 0.05, 0, 4);
    let m = attach("SIR", topo, example("SIR"));
    let one = multi_runs(&m, 30, 1, None, 4).unwrap();
    let twice = vec![one[0].clone(), one[0].clone(), one[0].clone()];
    for trajs in [one, twice] {
        let b = analytics::aggregate_runs(&trajs, 5.0, 95.0).unwrap();
        for band in &b.bands {
            assert_eq!(band.lower, band.median);
            assert_eq!(band.upper, band.median);
        }
    }
}

#[test]
fn exports_round_trip_and_parse() {
    let topo = topology_for("SEIR", 100, 0.05, 0, 6);
    let mut sim = Simulation::new(topo, "SEIR", example("SEIR"), 6).unwrap();
    sim.iteration_bunch(25).unwrap();
    let trend = analytics::trend(&sim.trajectory());

    let json = analytics::export(&trend, analytics::ExportFormat::Json, "SEIR");
    let back: Series = serde_json::from_str(&json).unwrap();
    assert_eq!(back, trend);

    let csv = analytics::export(&trend, analytics::ExportFormat::Csv, "SEIR");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "iteration,Susceptible,Exposed,Infected,Removed");
    assert_eq!(lines.count(), 25);

    let svg = analytics::export(&trend, analytics::ExportFormat::Svg, "SEIR");
    let statuses: Vec<&str> = svg
        .lines()
        .filter(|l| l.starts_with("<polyline"))
        .map(|l| l.split("data-status=\"").nth(1).unwrap().split('"').next().unwrap())
        .collect();
    assert_eq!(statuses, ["Susceptible", "Exposed", "Infected", "Removed"]);
    for line in svg.lines().filter(|l| l.starts_with("<polyline")) {
        let points = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 25);
    }
}

#[test]
fn trajectory_json_round_trips() {
    let topo = topology_for("SWIR", 80, 0.05, 0, 7);
    let mut sim = Simulation::new(topo, "SWIR", example("SWIR"), 7).unwrap();
    sim.iteration_bunch(10).unwrap();
    let traj = sim.trajectory();
    let back: netdiff_core::engine::Trajectory = serde_json::from_str(&traj.to_json()).unwrap();
    assert_eq!(back, traj);
    assert_eq!(back.meta.params.seed, Some(7));
}
