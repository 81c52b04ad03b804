//! Declarative experiment configuration: TOML file plus `--key=value` overrides.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use fockcomm::detectors::{DetectorKind, Grouping, Labeling, Party};
use fockcomm::gyni::WitnessKind;
use fockcomm::optics::BeamSplitterModel;
use fockcomm::states::{CutoffPolicy, Parity, SingleModeSpec, DEFAULT_MAX_CUTOFF, TAIL_TOL_ENV};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Gyni,
    GyniSweep,
    BellSweep,
    Theorem,
    PrepareCheck,
    Validate,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gyni => "gyni",
            Self::GyniSweep => "gyni-sweep",
            Self::BellSweep => "bell-sweep",
            Self::Theorem => "theorem",
            Self::PrepareCheck => "prepare-check",
            Self::Validate => "validate",
        }
    }

    pub fn is_sweep(self) -> bool {
        matches!(self, Self::GyniSweep | Self::BellSweep)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub kind: Option<ExperimentKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub state: StateConfig,
    #[serde(default)]
    pub optics: OpticsConfig,
    #[serde(default)]
    pub detector: DetectorsConfig,
    #[serde(default)]
    pub bell: BellConfig,
    #[serde(default)]
    pub theorem: TheoremConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Coherent,
    CatEven,
    CatOdd,
    SqueezedVacuum,
    PhotonAddedCoherent,
    Fock,
    FiniteSuperposition,
    /// `sqrt(lambda)|0> + sqrt(1 - lambda) e^{i phi}|1>`.
    Qubit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateConfig {
    pub kind: StateKind,
    pub alpha_sq: f64,
    pub alpha_phase: f64,
    pub r: f64,
    pub theta: f64,
    pub n: usize,
    pub lambda: f64,
    pub phi: f64,
    /// `[re, im]` pairs.
    pub coeffs: Vec<[f64; 2]>,
    pub tail_tol: Option<f64>,
    pub cutoff: Option<usize>,
    pub max_cutoff: usize,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            kind: StateKind::CatEven,
            alpha_sq: 1.0,
            alpha_phase: 0.0,
            r: 0.5,
            theta: 0.0,
            n: 1,
            lambda: 0.5,
            phi: 0.0,
            coeffs: Vec::new(),
            tail_tol: None,
            cutoff: None,
            max_cutoff: DEFAULT_MAX_CUTOFF,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpticsModel {
    Lossless,
    Lossy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OpticsConfig {
    pub model: OpticsModel,
    pub eta: f64,
}

impl Default for OpticsConfig {
    fn default() -> Self {
        Self { model: OpticsModel::Lossless, eta: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorType {
    Parity,
    Presence,
    Qubit,
    Tke,
    Sva,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelingConfig {
    Standard,
    Swapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupingConfig {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    pub kind: DetectorType,
    pub labeling: Option<LabelingConfig>,
    pub kappa: f64,
    pub n: usize,
    pub grouping: GroupingConfig,
    pub bins: usize,
    pub nu: f64,
    pub theta: f64,
    pub eps: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            kind: DetectorType::Parity,
            labeling: None,
            kappa: 1.0,
            n: 1,
            grouping: GroupingConfig::Even,
            bins: 8,
            nu: 0.0,
            theta: 0.0,
            eps: 0.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorsConfig {
    pub alice: DetectorConfig,
    pub bob: DetectorConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BellConfig {
    pub r: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl Default for BellConfig {
    fn default() -> Self {
        Self { r: 0.1, phi1: 0.0, phi2: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessConfig {
    RankOne,
    Full,
    Optimal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TheoremConfig {
    pub witness: WitnessConfig,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        Self { witness: WitnessConfig::RankOne }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub axes: Vec<Axis>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv: String,
    pub manifest: String,
    pub strict: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), csv: "results.csv".into(), manifest: "manifest.json".into(), strict: false }
    }
}

/// Config keys that a sweep axis name may abbreviate.
pub fn axis_targets(name: &str) -> Vec<String> {
    let alias: &[&str] = match name {
        "eta" => &["optics.eta"],
        "alpha_sq" => &["state.alpha_sq"],
        "alpha_phase" => &["state.alpha_phase"],
        "r" => &["state.r"],
        "lambda" => &["state.lambda"],
        "kappa" => &["detector.alice.kappa", "detector.bob.kappa"],
        "nu" => &["detector.alice.nu", "detector.bob.nu"],
        "theta" => &["detector.alice.theta"],
        "theta_p" => &["detector.bob.theta"],
        "phi1" => &["bell.phi1"],
        "phi2" => &["bell.phi2"],
        "bell_r" => &["bell.r"],
        _ => &[],
    };
    if alias.is_empty() {
        vec![name.to_string()]
    } else {
        alias.iter().map(|s| s.to_string()).collect()
    }
}

impl Axis {
    /// `start, start + step, ...` up to `stop` inclusive (within rounding).
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + self.step * i as f64).collect()
    }
}

/// Parses a `--key=value` override; values use TOML syntax and fall back to
/// bare strings.
pub fn parse_override(arg: &str) -> Option<(String, toml::Value)> {
    let body = arg.strip_prefix("--")?;
    let (key, raw) = body.split_once('=')?;
    if key.is_empty() {
        return None;
    }
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Some((key.to_string(), value))
}

/// Sets a dotted key inside a table, creating intermediate tables.
pub fn set_key(table: &mut toml::Table, key: &str, value: toml::Value) -> CliResult<()> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = table;
    for (i, part) in parts.iter().enumerate() {
        if i + 1 == parts.len() {
            cur.insert(part.to_string(), value);
            return Ok(());
        }
        let entry = cur.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(CliError::config(parts[..=i].join("."), "is not a table")),
        };
    }
    Ok(())
}

/// Reads the config file (if any) and applies overrides in order.
pub fn load_table(path: Option<&Path>, overrides: &[(String, toml::Value)]) -> CliResult<toml::Table> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            text.parse::<toml::Table>().map_err(|e| {
                let msg = e.to_string();
                CliError::config(p.display().to_string(), msg.trim().to_string())
            })?
        }
        None => toml::Table::new(),
    };
    for (k, v) in overrides {
        set_key(&mut table, k, v.clone())?;
    }
    Ok(table)
}

pub fn parse_config(table: &toml::Table) -> CliResult<ExperimentConfig> {
    let value = toml::Value::Table(table.clone());
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        let inner = inner.trim().to_string();
        let key = if path == "." { inner.split('`').nth(1).unwrap_or("").to_string() } else { path };
        CliError::config(key, inner)
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        if let Some(tol) = self.state.tail_tol {
            if !(tol > 0.0 && tol <= 1e-6) {
                return Err(CliError::config("state.tail_tol", format!("{tol} must lie in (0, 1e-6]")));
            }
        }
        for (i, axis) in self.sweep.axes.iter().enumerate() {
            if !(axis.step > 0.0) {
                return Err(CliError::config(format!("sweep.axes[{i}].step"), "must be positive"));
            }
            if !(axis.start <= axis.stop) {
                return Err(CliError::config(format!("sweep.axes[{i}].start"), "must not exceed stop"));
            }
            if axis.name.is_empty() {
                return Err(CliError::config(format!("sweep.axes[{i}].name"), "must not be empty"));
            }
        }
        Ok(())
    }

    /// Kind check against the subcommand; sweep axes are required exactly
    /// for the sweep kinds.
    pub fn check_kind(&self, kind: ExperimentKind) -> CliResult<()> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(CliError::config("kind", format!("config says {} but {} was requested", k.name(), kind.name())));
            }
        }
        match (kind.is_sweep(), self.sweep.axes.is_empty()) {
            (true, true) => Err(CliError::config("sweep.axes", format!("{} needs at least one axis", kind.name()))),
            (false, false) => Err(CliError::config("sweep.axes", format!("{} takes no sweep axes", kind.name()))),
            _ => Ok(()),
        }
    }

    /// Tail tolerance precedence: config or flag, then the environment, then
    /// the library default.
    pub fn cutoff_policy(&self) -> CliResult<CutoffPolicy> {
        let mut policy = match self.state.tail_tol {
            Some(tol) => CutoffPolicy::default().with_tail_tol(tol),
            None => CutoffPolicy::from_env().map_err(|e| CliError::config(TAIL_TOL_ENV, e.to_string()))?,
        };
        policy.fixed = self.state.cutoff;
        policy.max_cutoff = self.state.max_cutoff;
        Ok(policy)
    }

    pub fn state_spec(&self) -> CliResult<SingleModeSpec> {
        let s = &self.state;
        if !(s.alpha_sq >= 0.0) {
            return Err(CliError::config("state.alpha_sq", "must be non-negative"));
        }
        let alpha = C64::from_polar(s.alpha_sq.sqrt(), s.alpha_phase);
        Ok(match s.kind {
            StateKind::Coherent => SingleModeSpec::Coherent { alpha },
            StateKind::CatEven => SingleModeSpec::Cat { alpha, parity: Parity::Even },
            StateKind::CatOdd => SingleModeSpec::Cat { alpha, parity: Parity::Odd },
            StateKind::SqueezedVacuum => SingleModeSpec::SqueezedVacuum { r: s.r, theta: s.theta },
            StateKind::PhotonAddedCoherent => SingleModeSpec::PhotonAddedCoherent { alpha },
            StateKind::Fock => SingleModeSpec::Fock { n: s.n },
            StateKind::FiniteSuperposition => {
                if s.coeffs.is_empty() {
                    return Err(CliError::config("state.coeffs", "finite_superposition needs coefficients"));
                }
                SingleModeSpec::FiniteSuperposition { coeffs: s.coeffs.iter().map(|[a, b]| C64::new(*a, *b)).collect() }
            }
            StateKind::Qubit => {
                if !(0.0..=1.0).contains(&s.lambda) {
                    return Err(CliError::config("state.lambda", "must lie in [0, 1]"));
                }
                let coeffs = vec![C64::new(s.lambda.sqrt(), 0.0), C64::from_polar((1.0 - s.lambda).sqrt(), s.phi)];
                SingleModeSpec::FiniteSuperposition { coeffs }
            }
        })
    }

    pub fn beam_splitter(&self) -> CliResult<BeamSplitterModel> {
        match self.optics.model {
            OpticsModel::Lossless => Ok(BeamSplitterModel::Lossless5050),
            OpticsModel::Lossy => {
                BeamSplitterModel::lossy(self.optics.eta).map_err(|e| CliError::config("optics.eta", e.to_string()))
            }
        }
    }

    pub fn witness(&self) -> WitnessKind {
        match self.theorem.witness {
            WitnessConfig::RankOne => WitnessKind::RankOne,
            WitnessConfig::Full => WitnessKind::Full,
            WitnessConfig::Optimal => WitnessKind::Optimal,
        }
    }
}

impl DetectorConfig {
    pub fn kind(&self) -> DetectorKind {
        match self.kind {
            DetectorType::Parity => DetectorKind::Parity,
            DetectorType::Presence => DetectorKind::Presence,
            DetectorType::Qubit => DetectorKind::Qubit { theta: self.theta, eps: self.eps },
            DetectorType::Tke => DetectorKind::Tke {
                kappa: self.kappa,
                n: self.n,
                grouping: match self.grouping {
                    GroupingConfig::Even => Grouping::Even,
                    GroupingConfig::Odd => Grouping::Odd,
                },
            },
            DetectorType::Sva => DetectorKind::Sva { bins: self.bins, kappa: self.kappa, nu: self.nu },
        }
    }

    pub fn labeling(&self, party: Party) -> Labeling {
        match self.labeling {
            Some(LabelingConfig::Standard) => Labeling::Standard,
            Some(LabelingConfig::Swapped) => Labeling::Swapped,
            None => self.kind().default_labeling(party),
        }
    }
}
