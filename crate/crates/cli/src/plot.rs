//! Gnuplot-ready data files from run CSVs. No rendering.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{CliError, CliResult};

pub const FIGURES: [&str; 8] = ["fig1a", "fig1b", "fig1c", "fig1d", "fig2", "fig3", "fig3b", "fig-ch31"];

pub const THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug)]
enum Reference {
    /// A plane equal to one of the axes, e.g. `J = kappa` for the single photon.
    Axis(&'static str),
    Constant(f64),
}

struct Layout {
    axes: &'static [&'static str],
    value: &'static str,
    reference: Reference,
}

fn layout(figure: &str, lambda: f64) -> Option<Layout> {
    let l = |axes, value, reference| Some(Layout { axes, value, reference });
    match figure {
        "fig1a" | "fig1b" | "fig1c" | "fig1d" => l(&["phi1", "phi2"], "I", Reference::Constant(1.0)),
        "fig2" => l(&["eta", "alpha_sq"], "J", Reference::Axis("eta")),
        "fig3" => l(&["kappa"], "J", Reference::Axis("kappa")),
        "fig3b" => l(&["kappa", "alpha_sq"], "J", Reference::Axis("kappa")),
        "fig-ch31" => l(&["theta", "theta_p"], "J", Reference::Constant(1.0 / (1.0 + lambda))),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct PlotOutput {
    pub data: PathBuf,
    pub sidecar: PathBuf,
    pub blocks: usize,
    pub points: usize,
}

/// Writes `<figure>.dat` and `<figure>.json` into `out_dir`.
///
/// Grids are written one `x y z` line per point with a blank line between
/// scan lines; series as `x z`. Axes in the CSV that the figure does not use
/// split the data into gnuplot index blocks.
pub fn emit_plot_data(csv_path: &Path, figure: &str, out_dir: &Path, lambda: f64) -> CliResult<PlotOutput> {
    let spec = layout(figure, lambda)
        .ok_or_else(|| CliError::config("figure", format!("unknown figure `{figure}`; known: {}", FIGURES.join(", "))))?;
    let mut reader = csv::Reader::from_path(csv_path)?;
    let headers = reader.headers()?.clone();
    let index = |name: &str| headers.iter().position(|h| h == name);
    let mut wanted = Vec::new();
    for name in spec.axes.iter().chain([&spec.value]) {
        wanted.push(index(name).ok_or_else(|| {
            CliError::config("csv", format!("{} has no `{name}` column needed by {figure}", csv_path.display()))
        })?);
    }
    let results_start = headers
        .iter()
        .position(|h| h.starts_with("p_") || h.starts_with("xi_") || ["F", "fidelity", "J", "I"].contains(&h))
        .unwrap_or(0);
    let extra: Vec<usize> = (0..results_start).filter(|i| !wanted[..spec.axes.len()].contains(i)).collect();

    let mut groups: BTreeMap<Vec<OrdF64>, Vec<Vec<(f64, String)>>> = BTreeMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |i: usize| -> CliResult<(f64, String)> {
            let raw = record[i].to_string();
            let v: f64 = raw.parse().map_err(|_| {
                CliError::config("csv", format!("row {}: column `{}` is not a number: `{raw}`", line + 1, &headers[i]))
            })?;
            if !v.is_finite() {
                return Err(CliError::config("csv", format!("row {}: column `{}` is not finite", line + 1, &headers[i])));
            }
            Ok((v, raw))
        };
        let key = extra.iter().map(|&i| parse(i).map(|p| OrdF64(p.0))).collect::<CliResult<Vec<_>>>()?;
        let row = wanted.iter().map(|&i| parse(i)).collect::<CliResult<Vec<_>>>()?;
        groups.entry(key).or_default().push(row);
    }
    if groups.is_empty() {
        return Err(CliError::config("csv", format!("{} has no rows", csv_path.display())));
    }

    let mut text = String::new();
    let mut points = 0;
    let mut block_keys = Vec::new();
    for (b, (key, mut rows)) in groups.into_iter().enumerate() {
        rows.sort_by(|p, q| p.iter().zip(q).map(|(a, b)| a.0.total_cmp(&b.0)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        if b > 0 {
            text.push_str("\n\n");
        }
        let labels: Vec<String> = extra.iter().zip(&key).map(|(&i, v)| format!("{}={}", &headers[i], v.0)).collect();
        if !labels.is_empty() {
            text.push_str(&format!("# {}\n", labels.join(" ")));
        }
        block_keys.push(labels);
        let mut prev: Option<f64> = None;
        for row in &rows {
            if spec.axes.len() > 1 && prev.is_some_and(|p| p != row[0].0) {
                text.push('\n');
            }
            prev = Some(row[0].0);
            let fields: Vec<&str> = row.iter().map(|c| c.1.as_str()).collect();
            text.push_str(&fields.join(" "));
            text.push('\n');
            points += 1;
        }
    }

    fs::create_dir_all(out_dir)?;
    let data = out_dir.join(format!("{figure}.dat"));
    let sidecar = out_dir.join(format!("{figure}.json"));
    fs::write(&data, text)?;
    let reference = match spec.reference {
        Reference::Axis(a) => json!({ "kind": "axis", "column": a }),
        Reference::Constant(c) => json!({ "kind": "constant", "value": c }),
    };
    let mut columns: Vec<&str> = spec.axes.to_vec();
    columns.push(spec.value);
    let desc = json!({
        "figure": figure,
        "source_csv": csv_path.display().to_string(),
        "data": data.file_name().map(|n| n.to_string_lossy().into_owned()),
        "layout": if spec.axes.len() > 1 { "grid" } else { "series" },
        "columns": columns,
        "threshold": THRESHOLD,
        "reference": reference,
        "blocks": block_keys,
        "points": points,
    });
    fs::write(&sidecar, serde_json::to_string_pretty(&desc).expect("json") + "\n")?;
    Ok(PlotOutput { data, sidecar, blocks: block_keys.len(), points })
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
