use std::path::{Path, PathBuf};
use std::sync::Arc;

use netdiff_core::analytics::{self, ExportFormat, Series};
use netdiff_core::engine::{multi_runs, AttachedModel, Trajectory};
use tracing::info;

use crate::spec::RunSpec;
use crate::CliError;

#[derive(Debug, Default)]
pub struct RunReport {
    pub artifacts: Vec<PathBuf>,
}

struct Writer<'a> {
    dir: &'a Path,
    report: RunReport,
}

impl Writer<'_> {
    fn put(&mut self, name: String, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.report.artifacts.push(path);
        Ok(())
    }
}

/// Runs every model in `spec` and writes its artifacts.
///
/// Per model: `<label>-<run>.trajectory.json` for each run, then
/// `<label>.trend.<ext>` and `<label>.prevalence.<ext>` for each output format.
/// With several runs the series files hold the median and percentile band.
pub fn run(spec: &RunSpec) -> Result<RunReport, CliError> {
    spec.validate()?;
    let topology = Arc::new(spec.build_network()?);
    let models = spec
        .models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let cfg = spec.model_config(m, &topology);
            let seed = cfg.seed.unwrap_or(spec.execution.seed);
            AttachedModel::attach(Arc::clone(&topology), &m.name, cfg)
                .map(|model| (m.label(), model, seed))
                .map_err(|e| match CliError::from(e) {
                    CliError::Config(msg) => CliError::Config(format!("models[{i}] ({}): {msg}", m.label())),
                    other => other,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let formats = spec.formats()?;

    let dir = &spec.output.directory;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = Writer { dir, report: RunReport::default() };
    let mut trends: Vec<(String, Series)> = Vec::new();
    for (label, model, seed) in &models {
        info!(model = model.name(), label, runs = spec.execution.runs, "running");
        let runs = multi_runs(model, spec.execution.iterations, spec.execution.runs, None, *seed)?;
        write_model(&mut out, label, &runs, &formats, spec.execution.band)?;
        if runs.len() == 1 {
            trends.push((label.to_string(), analytics::trend(&runs[0])));
        }
    }
    if trends.len() > 1 {
        let refs: Vec<(&str, &Series)> = trends.iter().map(|(l, s)| (l.as_str(), s)).collect();
        let cmp = analytics::compare(&refs, None)?;
        for f in &formats {
            match f {
                ExportFormat::Csv => out.put("comparison.trend.csv".into(), &cmp.to_csv())?,
                ExportFormat::Svg => out.put("comparison.trend.svg".into(), &cmp.to_svg("trend comparison"))?,
                ExportFormat::Json => {}
            }
        }
    }
    Ok(out.report)
}

fn write_model(
    out: &mut Writer,
    label: &str,
    runs: &[Trajectory],
    formats: &[ExportFormat],
    [lo, hi]: [f64; 2],
) -> Result<(), CliError> {
    if formats.contains(&ExportFormat::Json) {
        for (r, t) in runs.iter().enumerate() {
            out.put(format!("{label}-{r}.trajectory.json"), &t.to_json())?;
        }
    }
    let trends: Vec<Series> = runs.iter().map(analytics::trend).collect();
    let prevalences: Vec<Series> = runs.iter().map(analytics::prevalence).collect();
    for (kind, series) in [("trend", &trends), ("prevalence", &prevalences)] {
        let title = format!("{label} {kind}");
        for &f in formats {
            let body = if series.len() == 1 {
                analytics::export(&series[0], f, &title)
            } else {
                analytics::export_banded(&analytics::aggregate_series(series, lo, hi)?, f, &title)
            };
            out.put(format!("{label}.{kind}.{}", f.extension()), &body)?;
        }
    }
    Ok(())
}
