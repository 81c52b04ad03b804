//! Experiment execution: sweep expansion, parallel evaluation, CSV and manifest.

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde_json::json;

use fockcomm::bell::{bell_test, BellSettings};
use fockcomm::detectors::{DetectorModel, Party};
use fockcomm::gyni::{prepare_outputs, theorem_witness, GyniResult};
use fockcomm::optics::verify_cat_noon_preparation;
use fockcomm::states::{build_noon, SingleModeSpec};

use crate::config::{axis_targets, parse_config, set_key, ExperimentConfig, ExperimentKind, StateKind};
use crate::error::{CliError, CliResult};

/// Probabilities further than this outside [0, 1] mark a row.
pub const PROB_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub strict: bool,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub rows: usize,
    pub flagged: Vec<usize>,
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Value(f64),
    Diag(f64),
    Count(u64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Self::Value(v) => format!("{v:.12}"),
            Self::Diag(v) => format!("{v:.6e}"),
            Self::Count(n) => n.to_string(),
        }
    }
}

struct Row {
    cells: Vec<Cell>,
    flagged: bool,
    cutoff: usize,
    tail_mass: f64,
}

fn result_columns(kind: ExperimentKind) -> Vec<String> {
    let mut cols = Vec::new();
    match kind {
        ExperimentKind::Gyni | ExperimentKind::GyniSweep => {
            for x in 0..2 {
                for y in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            cols.push(format!("p_{a}{b}_{x}{y}"));
                        }
                    }
                }
            }
            cols.extend(["J", "prob_min", "prob_max", "sum_defect", "symmetry_defect"].map(String::from));
        }
        ExperimentKind::BellSweep => {
            cols.extend(["xi_00", "xi_01", "xi_10", "xi_11", "I", "xi_max_abs"].map(String::from));
        }
        ExperimentKind::Theorem => {
            cols.extend(["F", "J", "protocol_J", "rank", "violation", "max_even_overlap"].map(String::from));
        }
        ExperimentKind::PrepareCheck => {
            cols.extend(["fidelity", "passed", "truncated_mass"].map(String::from));
        }
        ExperimentKind::Validate => {}
    }
    cols.extend(["cutoff", "tail_mass", "flag"].map(String::from));
    cols
}

fn evaluate(kind: ExperimentKind, cfg: &ExperimentConfig) -> CliResult<Row> {
    let policy = cfg.cutoff_policy()?;
    let spec = cfg.state_spec()?;
    let mut cells = Vec::new();
    let (flagged, cutoff, tail_mass) = match kind {
        ExperimentKind::Gyni | ExperimentKind::GyniSweep => {
            let src = spec.realize(&policy)?;
            let outputs = prepare_outputs(&src, &cfg.beam_splitter()?)?;
            let det = |c: &crate::config::DetectorConfig, party| {
                DetectorModel::new(c.kind(), src.cutoff(), c.labeling(party))
            };
            let alice = det(&cfg.detector.alice, Party::Alice)?;
            let bob = det(&cfg.detector.bob, Party::Bob)?;
            let res = outputs.evaluate_unchecked(&alice, &bob)?;
            let bad = gyni_cells(&res, &mut cells);
            (bad, src.cutoff(), src.tail_mass())
        }
        ExperimentKind::BellSweep => {
            let src = spec.realize(&policy)?;
            let noon = build_noon(&src)?;
            let b = &cfg.bell;
            let settings = BellSettings::new(b.r, b.phi1.rem_euclid(TAU), b.phi2.rem_euclid(TAU))
                .map_err(|e| CliError::config("bell", e.to_string()))?;
            let res = bell_test(noon.state(), &settings)?;
            let max_abs = res.correlators.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            cells.extend(res.correlators.iter().map(|&x| Cell::Value(x)));
            cells.push(Cell::Value(res.value));
            cells.push(Cell::Diag(max_abs));
            (max_abs > 1.0 + PROB_TOL, src.cutoff(), src.tail_mass())
        }
        ExperimentKind::Theorem => {
            let src = spec.realize(&policy)?;
            let w = theorem_witness(src.coeffs(), cfg.witness())?;
            cells.extend([
                Cell::Value(w.f),
                Cell::Value(w.j),
                Cell::Value(w.protocol_j),
                Cell::Count(w.rank() as u64),
                Cell::Count(w.violation as u64),
                Cell::Diag(w.max_even_overlap()),
            ]);
            ((w.protocol_j - w.j).abs() > PROB_TOL, src.cutoff(), src.tail_mass())
        }
        ExperimentKind::PrepareCheck => {
            let alpha = match (cfg.state.kind, &spec) {
                (StateKind::CatEven, SingleModeSpec::Cat { alpha, .. }) => *alpha,
                _ => return Err(CliError::config("state.kind", "prepare-check needs cat_even")),
            };
            let chk = verify_cat_noon_preparation(alpha, &policy)?;
            let tail = SingleModeSpec::even_cat(alpha).realize(&policy)?.tail_mass();
            cells.extend([Cell::Value(chk.fidelity), Cell::Count(chk.passed as u64), Cell::Diag(chk.truncated_mass)]);
            (!chk.passed, chk.cutoff, tail)
        }
        ExperimentKind::Validate => return Err(CliError::config("kind", "validate is not a run kind")),
    };
    cells.extend([Cell::Count(cutoff as u64), Cell::Diag(tail_mass), Cell::Count(flagged as u64)]);
    Ok(Row { cells, flagged, cutoff, tail_mass })
}

/// Appends the table, J and range diagnostics; true when the row is out
/// of tolerance.
fn gyni_cells(res: &GyniResult, cells: &mut Vec<Cell>) -> bool {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum_defect: f64 = 0.0;
    for row in &res.table {
        for cell in row {
            let mut sum = 0.0;
            for &p in cell.iter().flatten() {
                cells.push(Cell::Value(p));
                min = min.min(p);
                max = max.max(p);
                sum += p;
            }
            sum_defect = sum_defect.max((sum - 1.0).abs());
        }
    }
    cells.push(Cell::Value(res.j));
    cells.extend([Cell::Diag(min), Cell::Diag(max), Cell::Diag(sum_defect), Cell::Diag(res.symmetry_defect())]);
    min < -PROB_TOL || max > 1.0 + PROB_TOL || sum_defect > PROB_TOL
}

/// Grid points in row-major order (first axis slowest).
fn grid(cfg: &ExperimentConfig) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in &cfg.sweep.axes {
        let vals = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

fn lookup<'a>(table: &'a toml::Value, key: &str) -> Option<&'a toml::Value> {
    key.split('.').try_fold(table, |t, part| t.get(part))
}

/// Base table with the sweep values written into their target keys.
fn point_config(base: &toml::Table, defaults: &toml::Value, cfg: &ExperimentConfig, point: &[f64]) -> CliResult<ExperimentConfig> {
    let mut table = base.clone();
    for (axis, &v) in cfg.sweep.axes.iter().zip(point) {
        for key in axis_targets(&axis.name) {
            let value = match lookup(defaults, &key) {
                Some(toml::Value::Integer(_)) if v.fract() == 0.0 => toml::Value::Integer(v as i64),
                _ => toml::Value::Float(v),
            };
            set_key(&mut table, &key, value)?;
        }
    }
    parse_config(&table)
}

fn check_axes(cfg: &ExperimentConfig, defaults: &toml::Value) -> CliResult<()> {
    for (i, axis) in cfg.sweep.axes.iter().enumerate() {
        for key in axis_targets(&axis.name) {
            match lookup(defaults, &key) {
                Some(toml::Value::Float(_) | toml::Value::Integer(_)) => {}
                _ => {
                    return Err(CliError::config(
                        format!("sweep.axes[{i}].name"),
                        format!("`{}` is not a numeric config key", axis.name),
                    ))
                }
            }
        }
    }
    Ok(())
}

pub fn run(kind: ExperimentKind, base: &toml::Table, opts: &RunOptions) -> CliResult<RunSummary> {
    run_with(kind, base, opts, evaluate)
}

fn run_with<F>(kind: ExperimentKind, base: &toml::Table, opts: &RunOptions, eval: F) -> CliResult<RunSummary>
where
    F: Fn(ExperimentKind, &ExperimentConfig) -> CliResult<Row> + Sync,
{
    let started = Instant::now();
    let started_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let cfg = parse_config(base)?;
    cfg.check_kind(kind)?;
    let strict = opts.strict || cfg.output.strict;
    let defaults = toml::Value::try_from(&cfg).map_err(|e| CliError::config("", e.to_string()))?;
    check_axes(&cfg, &defaults)?;

    let points = grid(&cfg);
    let configs: Vec<ExperimentConfig> =
        points.iter().map(|p| point_config(base, &defaults, &cfg, p)).collect::<CliResult<_>>()?;
    let policy = cfg.cutoff_policy()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config("jobs", e.to_string()))?;
    let rows: Vec<Row> = pool.install(|| configs.par_iter().map(|c| eval(kind, c)).collect::<CliResult<_>>())?;

    let flagged: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.flagged).map(|(i, _)| i).collect();
    if strict && !flagged.is_empty() {
        return Err(CliError::Diagnostic(format!(
            "{} of {} rows outside tolerance (first at row {})",
            flagged.len(),
            rows.len(),
            flagged[0]
        )));
    }

    let dir = opts.out_dir.clone().unwrap_or_else(|| cfg.output.dir.clone());
    std::fs::create_dir_all(&dir)?;
    let csv_path = dir.join(&cfg.output.csv);
    let mut w = csv::Writer::from_path(&csv_path)?;
    let mut header: Vec<String> = cfg.sweep.axes.iter().map(|a| a.name.clone()).collect();
    header.extend(result_columns(kind));
    w.write_record(&header)?;
    for (p, row) in points.iter().zip(&rows) {
        let mut rec: Vec<String> = p.iter().map(|v| Cell::Value(*v).render()).collect();
        rec.extend(row.cells.iter().map(|c| c.render()));
        w.write_record(&rec)?;
    }
    w.flush()?;

    let cutoffs = rows.iter().map(|r| r.cutoff);
    let manifest = json!({
        "tool": "fockcomm",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": kind.name(),
        "config": cfg,
        "seed": cfg.seed,
        "cutoff_policy": {
            "tail_tol": policy.tail_tol,
            "fixed": policy.fixed,
            "max_cutoff": policy.max_cutoff,
        },
        "rows": rows.len(),
        "columns": header,
        "flagged_rows": flagged,
        "cutoff_min": cutoffs.clone().min(),
        "cutoff_max": cutoffs.max(),
        "tail_mass_max": rows.iter().map(|r| r.tail_mass).fold(0.0, f64::max),
        "csv": cfg.output.csv,
        "started_at_unix": started_at,
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    let manifest_path = dir.join(&cfg.output.manifest);
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest).expect("json value") + "\n")?;
    Ok(RunSummary { rows: rows.len(), flagged, csv: csv_path, manifest: manifest_path })
}
