//! Trend and prevalence series, cross-model comparison, percentile bands and export.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::Trajectory;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// Nodes per status at each iteration.
    Trend,
    /// Signed change of the per-status count at each iteration, from iteration 1.
    Prevalence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub status: String,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    pub kind: SeriesKind,
    pub iterations: Vec<u64>,
    /// One column per status, in status-code order.
    pub columns: Vec<Column>,
}

impl Series {
    pub fn column(&self, status: &str) -> Option<&[i64]> {
        self.columns.iter().find(|c| c.status == status).map(|c| c.values.as_slice())
    }

    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.status);
        }
        out.push('\n');
        for (row, it) in self.iterations.iter().enumerate() {
            write!(out, "{it}").unwrap();
            for c in &self.columns {
                write!(out, ",{}", c.values[row]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serialises")
    }

    pub fn to_svg(&self, title: &str) -> String {
        let lines: Vec<(&str, Vec<f64>)> =
            self.columns.iter().map(|c| (c.status.as_str(), c.values.iter().map(|&v| v as f64).collect())).collect();
        svg::render(title, &self.iterations, &lines, &[])
    }
}

fn columns_for(traj: &Trajectory) -> Vec<Column> {
    traj.meta.statuses.iter().map(|s| Column { status: s.clone(), values: Vec::new() }).collect()
}

/// Per-status node counts, one row per recorded iteration.
pub fn trend(traj: &Trajectory) -> Series {
    let mut columns = columns_for(traj);
    let mut iterations = Vec::with_capacity(traj.iterations.len());
    for d in &traj.iterations {
        iterations.push(d.iteration);
        for (code, col) in columns.iter_mut().enumerate() {
            col.values.push(d.node_count.get(&(code as u8)).copied().unwrap_or(0) as i64);
        }
    }
    Series { kind: SeriesKind::Trend, iterations, columns }
}

/// Per-status count changes, starting at iteration 1.
pub fn prevalence(traj: &Trajectory) -> Series {
    let mut columns = columns_for(traj);
    let mut iterations = Vec::new();
    for d in traj.iterations.iter().filter(|d| d.iteration >= 1) {
        iterations.push(d.iteration);
        for (code, col) in columns.iter_mut().enumerate() {
            col.values.push(d.status_delta.get(&(code as u8)).copied().unwrap_or(0));
        }
    }
    Series { kind: SeriesKind::Prevalence, iterations, columns }
}

/// Side-by-side view of several labelled series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub kind: SeriesKind,
    /// Union of all iteration indices, ascending.
    pub iterations: Vec<u64>,
    /// `label:status` columns; `None` where a series has no row for that iteration.
    pub columns: Vec<(String, Vec<Option<i64>>)>,
}

impl Comparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration");
        for (name, _) in &self.columns {
            write!(out, ",{name}").unwrap();
        }
        out.push('\n');
        for (row, it) in self.iterations.iter().enumerate() {
            write!(out, "{it}").unwrap();
            for (_, values) in &self.columns {
                match values[row] {
                    Some(v) => write!(out, ",{v}").unwrap(),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self, title: &str) -> String {
        let lines: Vec<(&str, Vec<f64>)> = self
            .columns
            .iter()
            .map(|(name, vals)| (name.as_str(), vals.iter().map(|v| v.map_or(f64::NAN, |x| x as f64)).collect()))
            .collect();
        svg::render(title, &self.iterations, &lines, &[])
    }
}

/// Aligns labelled series of one kind on their iteration index. With
/// `statuses`, only the listed statuses are kept.
pub fn compare(series: &[(&str, &Series)], statuses: Option<&[&str]>) -> Result<Comparison> {
    let Some((_, first)) = series.first() else {
        return Err(Error::param("series", "nothing to compare"));
    };
    if let Some((label, _)) = series.iter().find(|(_, s)| s.kind != first.kind) {
        return Err(Error::param("series", format!("`{label}` mixes trend and prevalence series")));
    }
    let mut iterations: Vec<u64> = series.iter().flat_map(|(_, s)| s.iterations.iter().copied()).collect();
    iterations.sort_unstable();
    iterations.dedup();
    let mut columns = Vec::new();
    for (label, s) in series {
        for col in &s.columns {
            if statuses.is_some_and(|keep| !keep.contains(&col.status.as_str())) {
                continue;
            }
            let values = iterations
                .iter()
                .map(|it| s.iterations.binary_search(it).ok().map(|row| col.values[row]))
                .collect();
            columns.push((format!("{label}:{}", col.status), values));
        }
    }
    Ok(Comparison { kind: first.kind, iterations, columns })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub status: String,
    pub lower: Vec<i64>,
    pub median: Vec<i64>,
    pub upper: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandedSeries {
    pub kind: SeriesKind,
    pub iterations: Vec<u64>,
    pub runs: usize,
    pub lower_pct: f64,
    pub upper_pct: f64,
    /// How the central line and envelopes were computed.
    pub central: String,
    pub method: String,
    pub bands: Vec<Band>,
}

impl BandedSeries {
    pub fn band(&self, status: &str) -> Option<&Band> {
        self.bands.iter().find(|b| b.status == status)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration");
        for b in &self.bands {
            write!(out, ",{0}_lower,{0}_median,{0}_upper", b.status).unwrap();
        }
        out.push('\n');
        for (row, it) in self.iterations.iter().enumerate() {
            write!(out, "{it}").unwrap();
            for b in &self.bands {
                write!(out, ",{},{},{}", b.lower[row], b.median[row], b.upper[row]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("banded series serialises")
    }

    pub fn to_svg(&self, title: &str) -> String {
        let to_f = |v: &[i64]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
        let lines: Vec<(&str, Vec<f64>)> = self.bands.iter().map(|b| (b.status.as_str(), to_f(&b.median))).collect();
        let areas: Vec<(Vec<f64>, Vec<f64>)> = self.bands.iter().map(|b| (to_f(&b.lower), to_f(&b.upper))).collect();
        svg::render(title, &self.iterations, &lines, &areas)
    }
}

/// Nearest-rank percentile of an ascending slice: the value at rank `ceil(p/100 * n)`.
pub fn nearest_rank(sorted: &[i64], pct: f64) -> i64 {
    let n = sorted.len();
    let rank = ((pct / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Pointwise median and `[lower_pct, upper_pct]` envelope over the trends of several runs.
pub fn aggregate_runs(trajectories: &[Trajectory], lower_pct: f64, upper_pct: f64) -> Result<BandedSeries> {
    let series: Vec<Series> = trajectories.iter().map(trend).collect();
    aggregate_series(&series, lower_pct, upper_pct)
}

/// As [`aggregate_runs`], over precomputed series of one kind.
pub fn aggregate_series(series: &[Series], lower_pct: f64, upper_pct: f64) -> Result<BandedSeries> {
    let Some(first) = series.first() else {
        return Err(Error::param("trajectories", "at least one run is required"));
    };
    if !(0.0..=100.0).contains(&lower_pct) || !(0.0..=100.0).contains(&upper_pct) || lower_pct >= upper_pct {
        return Err(Error::param("percentiles", format!("need 0 <= lower < upper <= 100, got {lower_pct}, {upper_pct}")));
    }
    for s in series {
        if s.kind != first.kind || s.iterations != first.iterations || s.columns.len() != first.columns.len() {
            return Err(Error::param("trajectories", "runs differ in kind, length or statuses"));
        }
    }
    let runs = series.len();
    let mut bands = Vec::with_capacity(first.columns.len());
    let mut scratch = vec![0i64; runs];
    for (c, col) in first.columns.iter().enumerate() {
        let len = first.iterations.len();
        let mut band = Band {
            status: col.status.clone(),
            lower: Vec::with_capacity(len),
            median: Vec::with_capacity(len),
            upper: Vec::with_capacity(len),
        };
        for row in 0..len {
            for (r, s) in series.iter().enumerate() {
                scratch[r] = s.columns[c].values[row];
            }
            scratch.sort_unstable();
            band.lower.push(nearest_rank(&scratch, lower_pct));
            band.median.push(nearest_rank(&scratch, 50.0));
            band.upper.push(nearest_rank(&scratch, upper_pct));
        }
        bands.push(band);
    }
    Ok(BandedSeries {
        kind: first.kind,
        iterations: first.iterations.clone(),
        runs,
        lower_pct,
        upper_pct,
        central: "median".into(),
        method: "nearest_rank".into(),
        bands,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Csv,
    Json,
    Svg,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
            ExportFormat::Svg => "svg",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(Error::param("format", format!("unknown export format `{other}`"))),
        }
    }
}

pub fn export(series: &Series, format: ExportFormat, title: &str) -> String {
    match format {
        ExportFormat::Csv => series.to_csv(),
        ExportFormat::Json => series.to_json(),
        ExportFormat::Svg => series.to_svg(title),
    }
}

pub fn export_banded(series: &BandedSeries, format: ExportFormat, title: &str) -> String {
    match format {
        ExportFormat::Csv => series.to_csv(),
        ExportFormat::Json => series.to_json(),
        ExportFormat::Svg => series.to_svg(title),
    }
}

mod svg {
    use std::fmt::Write as _;

    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 48.0;
    const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

    fn escape(s: &str) -> String {
        s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
    }

    /// One polyline per entry of `lines`; `areas[i]` (if any) is drawn as a
    /// translucent envelope behind line `i`. NaN values break nothing but are skipped.
    pub(super) fn render(title: &str, xs: &[u64], lines: &[(&str, Vec<f64>)], areas: &[(Vec<f64>, Vec<f64>)]) -> String {
        let finite = lines
            .iter()
            .flat_map(|(_, v)| v.iter())
            .chain(areas.iter().flat_map(|(a, b)| a.iter().chain(b)))
            .copied()
            .filter(|v| v.is_finite());
        let (mut lo, mut hi) = finite.fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi <= lo {
            hi = lo + 1.0;
        }
        if lo > 0.0 {
            lo = 0.0;
        }
        let x0 = xs.first().copied().unwrap_or(0) as f64;
        let x1 = (xs.last().copied().unwrap_or(1) as f64).max(x0 + 1.0);
        let px = |x: u64| PAD + (x as f64 - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let py = |y: f64| H - PAD - (y - lo) / (hi - lo) * (H - 2.0 * PAD);

        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        )
        .unwrap();
        writeln!(out, r#"<title>{}</title>"#, escape(title)).unwrap();
        writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#).unwrap();
        writeln!(
            out,
            r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black" stroke-width="1"/>"#,
            H - PAD,
            W - PAD
        )
        .unwrap();
        writeln!(out, r#"<text x="{PAD}" y="{}" font-size="12">{}</text>"#, PAD - 16.0, escape(title)).unwrap();
        writeln!(out, r#"<text x="{}" y="{}" font-size="10">{lo}</text>"#, 4.0, H - PAD).unwrap();
        writeln!(out, r#"<text x="{}" y="{}" font-size="10">{hi}</text>"#, 4.0, PAD).unwrap();

        for (i, (lower, upper)) in areas.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let mut pts = Vec::new();
            for (k, &x) in xs.iter().enumerate() {
                pts.push(format!("{:.2},{:.2}", px(x), py(upper[k])));
            }
            for (k, &x) in xs.iter().enumerate().rev() {
                pts.push(format!("{:.2},{:.2}", px(x), py(lower[k])));
            }
            writeln!(out, r#"<polygon points="{}" fill="{colour}" fill-opacity="0.2" stroke="none"/>"#, pts.join(" "))
                .unwrap();
        }
        for (i, (name, values)) in lines.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = xs
                .iter()
                .zip(values)
                .filter(|(_, v)| v.is_finite())
                .map(|(&x, &v)| format!("{:.2},{:.2}", px(x), py(v)))
                .collect();
            writeln!(
                out,
                r#"<polyline data-status="{}" points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                escape(name),
                pts.join(" ")
            )
            .unwrap();
            writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="10" fill="{colour}">{}</text>"#,
                W - PAD + 4.0,
                PAD + 12.0 * i as f64,
                escape(name)
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(kind: SeriesKind, cols: &[(&str, &[i64])]) -> Series {
        let len = cols.first().map_or(0, |c| c.1.len());
        let start = if kind == SeriesKind::Trend { 0 } else { 1 };
        Series {
            kind,
            iterations: (start..start + len as u64).collect(),
            columns: cols.iter().map(|(s, v)| Column { status: s.to_string(), values: v.to_vec() }).collect(),
        }
    }

    #[test]
    fn empty_series_csv_is_header_only() {
        let s = series(SeriesKind::Trend, &[("Susceptible", &[]), ("Infected", &[])]);
        assert_eq!(s.to_csv(), "iteration,Susceptible,Infected\n");
    }

    #[test]
    fn compare_filters_and_labels() {
        let a = series(SeriesKind::Trend, &[("Susceptible", &[5, 4]), ("Infected", &[1, 2])]);
        let b = series(SeriesKind::Trend, &[("Susceptible", &[5, 3, 2]), ("Infected", &[1, 3, 4])]);
        let c = compare(&[("SI", &a), ("SIR", &b)], Some(&["Infected"])).unwrap();
        assert_eq!(c.to_csv(), "iteration,SI:Infected,SIR:Infected\n0,1,1\n1,2,3\n2,,4\n");
    }

    #[test]
    fn nearest_rank_values() {
        let v = [15, 20, 35, 40, 50];
        assert_eq!(nearest_rank(&v, 5.0), 15);
        assert_eq!(nearest_rank(&v, 30.0), 20);
        assert_eq!(nearest_rank(&v, 40.0), 20);
        assert_eq!(nearest_rank(&v, 50.0), 35);
        assert_eq!(nearest_rank(&v, 100.0), 50);
        assert_eq!(nearest_rank(&v, 0.0), 15);
    }

    #[test]
    fn aggregate_rejects_bad_input() {
        assert!(aggregate_series(&[], 25.0, 75.0).is_err());
        let a = series(SeriesKind::Trend, &[("I", &[1, 2])]);
        assert!(aggregate_series(std::slice::from_ref(&a), 75.0, 25.0).is_err());
        let b = series(SeriesKind::Trend, &[("I", &[1])]);
        assert!(aggregate_series(&[a, b], 25.0, 75.0).is_err());
    }

    #[test]
    fn svg_polyline_per_status() {
        let s = series(SeriesKind::Trend, &[("A", &[1, 2, 3]), ("B", &[3, 2, 1]), ("C", &[0, 0, 0])]);
        let svg = s.to_svg("t");
        assert_eq!(svg.matches("<polyline").count(), 3);
    }
}
