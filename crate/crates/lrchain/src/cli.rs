//! Command-line front end: run configurations, CSV/manifest output, and the
//! `lrchain` subcommands.
//!
//! Every run is described by a [`RunConfig`] — a JSON-serializable value the
//! subcommand flags are merged into. Data commands write CSV files plus a
//! JSON *manifest* recording the tool version, the fully resolved
//! configuration, wall-clock time, and the produced files. Feeding a
//! manifest back via `--config` replays the run and reproduces the CSV
//! byte for byte (flags given alongside `--config` override fields).
//!
//! Conventions shared by all subcommands:
//! - CSV schema is `site,t_over_tau,<quantity>` with quantity one of
//!   `C`, `C_bar`, `P`, `P_R`; values are printed with 17 significant digits
//!   (`{:.16e}`), which round-trips `f64` exactly. Rows iterate times
//!   (outer) and sites (inner).
//! - stdout carries machine-readable payloads only (`labels`,
//!   `oracle-check`); progress and diagnostics go to stderr.
//! - On failure a single JSON line `{"category":…,"message":…}` is printed
//!   to stderr and the process exits with 2 (configuration), 3 (numerical),
//!   or 4 (I/O).
//! - `LRCHAIN_THREADS` caps the worker thread count (default: all cores).

use crate::analysis::{
    extract_lightcone, fit_front_velocity, hss_fit, localization_length, stationarity_check,
    FrontFit, LightCone,
};
use crate::chain::{ChainSpec, TbChainSpec};
use crate::ensemble::{
    ensemble_average_observed, sample_configuration, tb_ensemble_average_observed, DisorderModel,
};
use crate::error::{Error, Result};
use crate::field::{CorrelationField, FieldSource, Quantity};
use crate::oracle::randomized_agreement;
use crate::tight_binding::TbPropagator;
use crate::walk;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Contour levels used by `analyze lightcone` when none are given.
pub const DEFAULT_LEVELS: [f64; 7] = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4];
/// Stationarity tolerance used when none is given.
pub const DEFAULT_STATIONARITY_TOL: f64 = 0.01;

// ---------------------------------------------------------------------------
// Run configurations
// ---------------------------------------------------------------------------

/// A time grid: either explicit samples or a uniform `linspace`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeGrid {
    /// Explicit, strictly increasing times (in units of τ).
    List(Vec<f64>),
    /// `count` evenly spaced samples from `start` to `stop` inclusive.
    Linspace { start: f64, stop: f64, count: usize },
}

impl TimeGrid {
    /// Materializes the grid, validating it is non-empty, finite, and
    /// strictly increasing.
    pub fn resolve(&self) -> Result<Vec<f64>> {
        let times = match self {
            TimeGrid::List(v) => v.clone(),
            TimeGrid::Linspace { start, stop, count } => {
                if *count == 0 {
                    return Err(Error::InvalidConfig("time grid needs count ≥ 1".into()));
                }
                if *count == 1 {
                    vec![*start]
                } else {
                    if !(stop > start) {
                        return Err(Error::InvalidConfig(format!(
                            "time grid needs stop > start, got {start}:{stop}"
                        )));
                    }
                    let step = (stop - start) / (*count as f64 - 1.0);
                    (0..*count).map(|i| start + step * i as f64).collect()
                }
            }
        };
        if times.is_empty() {
            return Err(Error::InvalidConfig("time grid must not be empty".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidConfig("time grid must be finite".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("time grid must be strictly increasing".into()));
        }
        Ok(times)
    }
}

/// An inclusive range of 1-based sites, written `first..last` on the
/// command line (a bare `k` means the single site `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteRange {
    pub first: usize,
    pub last: usize,
}

impl SiteRange {
    pub fn resolve(&self) -> Result<Vec<usize>> {
        if self.first == 0 || self.last < self.first {
            return Err(Error::InvalidConfig(format!(
                "site range needs 1 ≤ first ≤ last, got {}..{}",
                self.first, self.last
            )));
        }
        Ok((self.first..=self.last).collect())
    }
}

impl FromStr for SiteRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot parse site range '{s}' (want A..B or K)"));
        let parse = |p: &str| p.trim().parse::<usize>().map_err(|_| bad());
        if let Some((a, b)) = s.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(SiteRange { first: parse(a)?, last: parse(b)? })
        } else {
            let k = parse(s)?;
            Ok(SiteRange { first: k, last: k })
        }
    }
}

fn resolve_sites(range: Option<SiteRange>, n_sites: usize) -> Result<Vec<usize>> {
    match range {
        Some(r) => r.resolve(),
        None => Ok((1..=n_sites).collect()),
    }
}

/// One transverse-field Ising chain (homogeneous, or one disorder draw when
/// `width > 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfimConfig {
    pub qubits: usize,
    /// Coupling `J'` (the disorder center when `width > 0`).
    pub coupling: f64,
    #[serde(default)]
    pub width: f64,
    #[serde(default)]
    pub seed: u64,
    /// Which disorder configuration to draw (`width > 0` runs).
    #[serde(default)]
    pub config_index: u64,
    pub times: TimeGrid,
    #[serde(default)]
    pub sites: Option<SiteRange>,
    pub out: PathBuf,
}

fn default_center() -> f64 {
    1.0
}

/// One tight-binding chain (homogeneous, or one hopping-disorder draw).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TbConfig {
    pub length: usize,
    /// Hopping center in units of γ₀.
    #[serde(default = "default_center")]
    pub center: f64,
    #[serde(default)]
    pub width: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub config_index: u64,
    pub times: TimeGrid,
    #[serde(default)]
    pub sites: Option<SiteRange>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleModel {
    Tfim,
    Tb,
}

/// A disorder-averaged run over `configs` configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub model: EnsembleModel,
    /// Chain size for `model = tfim`.
    #[serde(default)]
    pub qubits: Option<usize>,
    /// Chain size for `model = tb`.
    #[serde(default)]
    pub length: Option<usize>,
    pub center: f64,
    pub width: f64,
    pub configs: usize,
    #[serde(default)]
    pub seed: u64,
    pub times: TimeGrid,
    #[serde(default)]
    pub sites: Option<SiteRange>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalysisKind {
    Lightcone,
    Stationarity,
    Kthresh,
    Hss,
}

/// A post-processing run over CSV files produced by the data commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub analysis: AnalysisKind,
    pub input: PathBuf,
    /// Second input for two-file stationarity comparisons.
    #[serde(default)]
    pub input_b: Option<PathBuf>,
    /// Contour levels (lightcone).
    #[serde(default)]
    pub levels: Option<Vec<f64>>,
    /// Contour level to fit a velocity to (lightcone).
    #[serde(default)]
    pub fit_level: Option<f64>,
    /// Time window `(t_min, t_max)` of the velocity fit (lightcone).
    #[serde(default)]
    pub fit_window: Option<(f64, f64)>,
    /// Stationarity tolerance.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Threshold for `kthresh`.
    #[serde(default)]
    pub threshold: Option<f64>,
    /// Time sample to analyze (kthresh/hss); defaults to the latest.
    #[serde(default)]
    pub time: Option<f64>,
    /// Early time of a stationarity pair.
    #[serde(default)]
    pub time_a: Option<f64>,
    /// Late time of a stationarity pair.
    #[serde(default)]
    pub time_b: Option<f64>,
    pub out: PathBuf,
}

fn default_oracle_qubits() -> usize {
    10
}
fn default_oracle_trials() -> usize {
    50
}
fn default_oracle_seed() -> u64 {
    271_828
}
fn default_oracle_tol() -> f64 {
    1e-8
}
fn default_oracle_t_max() -> f64 {
    20.0
}
fn default_oracle_coupling_max() -> f64 {
    2.0
}

/// Randomized walk-vs-oracle agreement run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheckConfig {
    /// Largest chain size drawn (2..=12).
    #[serde(default = "default_oracle_qubits")]
    pub qubits: usize,
    #[serde(default = "default_oracle_trials")]
    pub trials: usize,
    #[serde(default = "default_oracle_seed")]
    pub seed: u64,
    #[serde(default = "default_oracle_tol")]
    pub tol: f64,
    #[serde(default = "default_oracle_t_max")]
    pub t_max: f64,
    #[serde(default = "default_oracle_coupling_max")]
    pub coupling_max: f64,
    /// Optional path for the JSON report (also printed to stdout).
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// Print the Pauli strings the operator walk moves through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsConfig {
    pub qubits: usize,
}

/// A fully described run: what to compute and where to put it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum RunConfig {
    Tfim(TfimConfig),
    Tb(TbConfig),
    Ensemble(EnsembleConfig),
    Analyze(AnalyzeConfig),
    OracleCheck(OracleCheckConfig),
    Labels(LabelsConfig),
}

impl RunConfig {
    fn experiment_name(&self) -> &'static str {
        match self {
            RunConfig::Tfim(_) => "tfim",
            RunConfig::Tb(_) => "tb",
            RunConfig::Ensemble(_) => "ensemble",
            RunConfig::Analyze(_) => "analyze",
            RunConfig::OracleCheck(_) => "oracle-check",
            RunConfig::Labels(_) => "labels",
        }
    }
}

/// Loads a [`RunConfig`] from a JSON file. Manifests are accepted too: a
/// top-level `config` object holding an `experiment` tag is unwrapped, so a
/// previous run's manifest replays it.
pub fn load_config_file(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    let config_value = match value.get("config") {
        Some(inner) if inner.get("experiment").is_some() => inner.clone(),
        _ => value,
    };
    serde_json::from_value(config_value)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// CSV and manifest I/O
// ---------------------------------------------------------------------------

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}

/// Writes a field as `site,t_over_tau,<quantity>` CSV with exact-round-trip
/// precision (outer loop times, inner loop sites).
pub fn write_field_csv(path: &Path, field: &CorrelationField) -> Result<()> {
    create_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["site", "t_over_tau", field.quantity().column_name()])?;
    for (ti, &t) in field.times().iter().enumerate() {
        for (si, &k) in field.sites().iter().enumerate() {
            w.write_record([
                k.to_string(),
                format!("{t:.16e}"),
                format!("{:.16e}", field.value(si, ti)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a field back from CSV. The quantity is inferred from the header;
/// rows must form complete time blocks over a fixed site list (the layout
/// [`write_field_csv`] produces). The field revalidates all its invariants
/// on construction.
pub fn read_field_csv(path: &Path) -> Result<CorrelationField> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers().map_err(Error::from)?.clone();
    if headers.len() != 3 || &headers[0] != "site" || &headers[1] != "t_over_tau" {
        return Err(Error::InvalidConfig(format!(
            "{}: expected header site,t_over_tau,<quantity>",
            path.display()
        )));
    }
    let quantity = Quantity::from_column_name(&headers[2])?;
    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    for (li, record) in rdr.records().enumerate() {
        let record = record.map_err(Error::from)?;
        let cell = |i: usize| -> Result<&str> {
            record.get(i).ok_or_else(|| {
                Error::InvalidConfig(format!("{}: row {} is short", path.display(), li + 2))
            })
        };
        let parse_err =
            |what: &str| Error::InvalidConfig(format!("{}: bad {what} in row {}", path.display(), li + 2));
        rows.push((
            cell(0)?.parse::<usize>().map_err(|_| parse_err("site"))?,
            cell(1)?.parse::<f64>().map_err(|_| parse_err("time"))?,
            cell(2)?.parse::<f64>().map_err(|_| parse_err("value"))?,
        ));
    }
    if rows.is_empty() {
        return Err(Error::InvalidConfig(format!("{}: no data rows", path.display())));
    }
    let t0 = rows[0].1;
    let sites: Vec<usize> =
        rows.iter().take_while(|r| r.1 == t0).map(|r| r.0).collect();
    let n_s = sites.len();
    if n_s == 0 || rows.len() % n_s != 0 {
        return Err(Error::InvalidConfig(format!(
            "{}: rows do not form complete time blocks",
            path.display()
        )));
    }
    let n_t = rows.len() / n_s;
    let mut times = Vec::with_capacity(n_t);
    for b in 0..n_t {
        let t = rows[b * n_s].1;
        times.push(t);
        for (j, &site) in sites.iter().enumerate() {
            let row = &rows[b * n_s + j];
            if row.0 != site || row.1 != t {
                return Err(Error::InvalidConfig(format!(
                    "{}: inconsistent site/time layout at row {}",
                    path.display(),
                    b * n_s + j + 2
                )));
            }
        }
    }
    let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
    CorrelationField::new(
        sites,
        times,
        values,
        quantity,
        1,
        FieldSource::File { path: path.display().to_string() },
    )
}

/// Sidecar record written next to every produced file: enough to reproduce
/// the run exactly (`lrchain <cmd> --config <manifest>`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub created_unix: u64,
    pub wall_clock_seconds: f64,
    pub config: RunConfig,
    /// Data files this run produced (the manifest itself is not listed).
    pub outputs: Vec<String>,
}

/// Strip a trailing `.csv`/`.json` extension if present, leaving any other
/// name untouched. `Path::with_extension` would also truncate stems that
/// merely contain a dot (`run-0.5` → `run-0`), mangling user-chosen names.
fn strip_data_extension(path: &Path) -> PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") | Some("json") => path.with_extension(""),
        _ => path.to_path_buf(),
    }
}

fn manifest_path(anchor: &Path) -> PathBuf {
    PathBuf::from(format!(
        "{}.manifest.json",
        strip_data_extension(anchor).display()
    ))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    create_parent(path)?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Io(format!("serializing {}: {e}", path.display())))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

/// What a run produced.
#[derive(Debug)]
pub struct RunOutcome {
    /// Every file written, manifest included.
    pub outputs: Vec<PathBuf>,
    /// Machine-readable payload for stdout (labels, oracle report).
    pub stdout_payload: Option<String>,
    /// Set when the run completed but its verdict is a failure
    /// (oracle deviation beyond tolerance): the payload and files are still
    /// produced, and the process should exit with this error.
    pub failure: Option<Error>,
}

fn single_draw_couplings(
    center: f64,
    width: f64,
    seed: u64,
    config_index: u64,
    n_bonds: usize,
) -> Result<Vec<f64>> {
    let model = DisorderModel::new(center, width, (config_index + 1) as usize, seed)?;
    sample_configuration(&model, config_index, n_bonds)
}

fn run_tfim(cfg: &TfimConfig) -> Result<Vec<PathBuf>> {
    let times = cfg.times.resolve()?;
    let sites = resolve_sites(cfg.sites, cfg.qubits)?;
    let couplings = single_draw_couplings(
        cfg.coupling,
        cfg.width,
        cfg.seed,
        cfg.config_index,
        cfg.qubits.saturating_sub(1),
    )?;
    let spec = ChainSpec::new(cfg.qubits, couplings, cfg.coupling)?;
    let wm = walk::build_walk_matrix(spec)?;
    let field = walk::correlation_field(&wm, &times, &sites)?;
    write_field_csv(&cfg.out, &field)?;
    Ok(vec![cfg.out.clone()])
}

/// `run.csv` → `run.P.csv` / `run.P_R.csv` for the two probability fields.
fn quantity_path(out: &Path, quantity: Quantity) -> PathBuf {
    PathBuf::from(format!(
        "{}.{}.csv",
        strip_data_extension(out).display(),
        quantity.column_name()
    ))
}

fn run_tb(cfg: &TbConfig) -> Result<Vec<PathBuf>> {
    let times = cfg.times.resolve()?;
    let sites = resolve_sites(cfg.sites, cfg.length)?;
    let hoppings = single_draw_couplings(
        cfg.center,
        cfg.width,
        cfg.seed,
        cfg.config_index,
        cfg.length.saturating_sub(1),
    )?;
    let prop = TbPropagator::new(TbChainSpec::new(cfg.length, hoppings, 1.0)?)?;
    let (p, pr) = prop.probability_fields(&times, &sites)?;
    let p_path = quantity_path(&cfg.out, Quantity::P);
    let pr_path = quantity_path(&cfg.out, Quantity::PR);
    write_field_csv(&p_path, &p)?;
    write_field_csv(&pr_path, &pr)?;
    Ok(vec![p_path, pr_path])
}

fn run_ensemble(cfg: &EnsembleConfig) -> Result<Vec<PathBuf>> {
    let model = DisorderModel::new(cfg.center, cfg.width, cfg.configs, cfg.seed)?;
    let times = cfg.times.resolve()?;
    let progress = |done: usize, total: usize| {
        let step = (total / 20).max(1);
        if done % step == 0 || done == total {
            eprintln!("configurations: {done}/{total}");
        }
    };
    match cfg.model {
        EnsembleModel::Tfim => {
            let n = cfg.qubits.ok_or_else(|| {
                Error::InvalidConfig("ensemble with model tfim needs qubits".into())
            })?;
            let sites = resolve_sites(cfg.sites, n)?;
            let field = ensemble_average_observed(&model, n, &times, &sites, Some(&progress))?;
            write_field_csv(&cfg.out, &field)?;
            Ok(vec![cfg.out.clone()])
        }
        EnsembleModel::Tb => {
            let n = cfg.length.ok_or_else(|| {
                Error::InvalidConfig("ensemble with model tb needs length".into())
            })?;
            let sites = resolve_sites(cfg.sites, n)?;
            let (p, pr) =
                tb_ensemble_average_observed(&model, n, &times, &sites, Some(&progress))?;
            let p_path = quantity_path(&cfg.out, Quantity::P);
            let pr_path = quantity_path(&cfg.out, Quantity::PR);
            write_field_csv(&p_path, &p)?;
            write_field_csv(&pr_path, &pr)?;
            Ok(vec![p_path, pr_path])
        }
    }
}

/// Reduces a loaded field to the single-time snapshot at `t` (or the latest
/// sample when `t` is `None`).
fn select_time(field: CorrelationField, t: Option<f64>) -> Result<CorrelationField> {
    match t {
        None => field.at_time_index(field.times().len() - 1),
        Some(t) => {
            let ti = field.time_index(t).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "time {t} is not among the samples {:?}",
                    field.times()
                ))
            })?;
            field.at_time_index(ti)
        }
    }
}

#[derive(Serialize)]
struct LightconeReport<'a> {
    input: String,
    cone: &'a LightCone,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<&'a FrontFit>,
}

fn run_analyze(cfg: &AnalyzeConfig) -> Result<Vec<PathBuf>> {
    match cfg.analysis {
        AnalysisKind::Lightcone => {
            let field = read_field_csv(&cfg.input)?;
            let levels = cfg.levels.clone().unwrap_or_else(|| DEFAULT_LEVELS.to_vec());
            let cone = extract_lightcone(&field, &levels)?;
            let fit = match (cfg.fit_level, cfg.fit_window) {
                (Some(level), Some(window)) => Some(fit_front_velocity(&cone, level, window)?),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidConfig(
                        "a velocity fit needs both fit_level and fit_window".into(),
                    ))
                }
            };
            let report = LightconeReport {
                input: cfg.input.display().to_string(),
                cone: &cone,
                fit: fit.as_ref(),
            };
            write_json(&cfg.out, &report)?;
        }
        AnalysisKind::Stationarity => {
            let tol = cfg.tol.unwrap_or(DEFAULT_STATIONARITY_TOL);
            let a_full = read_field_csv(&cfg.input)?;
            let (early, late) = match &cfg.input_b {
                Some(b_path) => {
                    let b_full = read_field_csv(b_path)?;
                    (select_time(a_full, cfg.time_a)?, select_time(b_full, cfg.time_b)?)
                }
                None => {
                    if a_full.times().len() < 2 && (cfg.time_a.is_none() || cfg.time_b.is_none()) {
                        return Err(Error::InvalidConfig(
                            "stationarity needs two time samples; give input_b or a \
                             two-time input"
                                .into(),
                        ));
                    }
                    let ta = cfg.time_a.unwrap_or(a_full.times()[0]);
                    let tb = cfg.time_b.unwrap_or(*a_full.times().last().expect("non-empty"));
                    (select_time(a_full.clone(), Some(ta))?, select_time(a_full, Some(tb))?)
                }
            };
            let report = stationarity_check(&early, &late, tol)?;
            write_json(&cfg.out, &report)?;
        }
        AnalysisKind::Kthresh => {
            let threshold = cfg
                .threshold
                .ok_or_else(|| Error::InvalidConfig("kthresh needs a threshold".into()))?;
            let field = select_time(read_field_csv(&cfg.input)?, cfg.time)?;
            let report = localization_length(&field, threshold)?;
            write_json(&cfg.out, &report)?;
        }
        AnalysisKind::Hss => {
            let field = select_time(read_field_csv(&cfg.input)?, cfg.time)?;
            let fit = hss_fit(&field)?;
            write_json(&cfg.out, &fit)?;
        }
    }
    Ok(vec![cfg.out.clone()])
}

fn run_oracle_check(cfg: &OracleCheckConfig) -> Result<(Vec<PathBuf>, String, Option<Error>)> {
    let report = randomized_agreement(
        cfg.qubits,
        cfg.trials,
        cfg.seed,
        cfg.t_max,
        cfg.coupling_max,
        cfg.tol,
    )?;
    let payload = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Io(format!("serializing oracle report: {e}")))?;
    let mut files = Vec::new();
    if let Some(out) = &cfg.out {
        write_json(out, &report)?;
        files.push(out.clone());
    }
    let failure = (!report.pass).then(|| {
        Error::Numerical(format!(
            "walk deviates from the oracle by {:.3e} (tolerance {:.3e}) at trial {}, \
             {} qubits, site {}, t = {}",
            report.max_abs_deviation,
            report.tolerance,
            report.worst.trial,
            report.worst.n_qubits,
            report.worst.site,
            report.worst.t_over_tau
        ))
    });
    Ok((files, payload, failure))
}

fn run_labels(cfg: &LabelsConfig) -> Result<String> {
    let spec = ChainSpec::uniform(cfg.qubits, 1.0)?;
    Ok(walk::pauli_string_labels(&spec).join("\n"))
}

/// Executes a run configuration: computes, writes data files, and writes a
/// manifest next to the primary output. This is the whole CLI behind a
/// callable interface.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let t_start = std::time::Instant::now();
    let (files, manifest_anchor, stdout_payload, failure) = match config {
        RunConfig::Tfim(cfg) => (run_tfim(cfg)?, Some(cfg.out.clone()), None, None),
        RunConfig::Tb(cfg) => (run_tb(cfg)?, Some(cfg.out.clone()), None, None),
        RunConfig::Ensemble(cfg) => (run_ensemble(cfg)?, Some(cfg.out.clone()), None, None),
        RunConfig::Analyze(cfg) => (run_analyze(cfg)?, Some(cfg.out.clone()), None, None),
        RunConfig::OracleCheck(cfg) => {
            let (files, payload, failure) = run_oracle_check(cfg)?;
            let anchor = cfg.out.clone();
            (files, anchor, Some(payload), failure)
        }
        RunConfig::Labels(cfg) => (Vec::new(), None, Some(run_labels(cfg)?), None),
    };
    let mut outputs = files.clone();
    if let Some(anchor) = manifest_anchor {
        let manifest = Manifest {
            tool: "lrchain".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap_or_default()
                .as_secs(),
            wall_clock_seconds: t_start.elapsed().as_secs_f64(),
            config: config.clone(),
            outputs: files.iter().map(|p| p.display().to_string()).collect(),
        };
        let m_path = manifest_path(&anchor);
        write_json(&m_path, &manifest)?;
        outputs.push(m_path);
    }
    Ok(RunOutcome { outputs, stdout_payload, failure })
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "lrchain",
    version,
    about = "Lieb–Robinson correlation fronts on long Ising chains via the operator Pauli walk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve C_k(t) for one transverse-field Ising chain
    Tfim(TfimArgs),
    /// Evolve single-particle probabilities on one tight-binding chain
    #[command(alias = "tb-evolve")]
    Tb(TbArgs),
    /// Disorder-average a correlation or probability field
    Ensemble(EnsembleArgs),
    /// Post-process CSV fields (light cones, stationarity, thresholds, envelopes)
    Analyze(AnalyzeArgs),
    /// Compare the walk against the brute-force oracle on random chains
    OracleCheck(OracleCheckArgs),
    /// Print the Pauli strings the operator walk moves through
    Labels(LabelsArgs),
}

/// Shared time-grid flags: `--times` beats nothing, `--time-grid` expands a
/// linspace; giving both is ambiguous.
fn merge_times(
    times: Option<Vec<f64>>,
    time_grid: Option<String>,
    base: Option<TimeGrid>,
) -> Result<TimeGrid> {
    match (times, time_grid) {
        (Some(_), Some(_)) => {
            Err(Error::InvalidConfig("give either --times or --time-grid, not both".into()))
        }
        (Some(list), None) => Ok(TimeGrid::List(list)),
        (None, Some(s)) => parse_time_grid(&s),
        (None, None) => {
            base.ok_or_else(|| Error::InvalidConfig("a time grid is required".into()))
        }
    }
}

/// Parses `start:stop:count`.
fn parse_time_grid(s: &str) -> Result<TimeGrid> {
    let bad = || {
        Error::InvalidConfig(format!("cannot parse time grid '{s}' (want START:STOP:COUNT)"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(TimeGrid::Linspace {
        start: parts[0].trim().parse().map_err(|_| bad())?,
        stop: parts[1].trim().parse().map_err(|_| bad())?,
        count: parts[2].trim().parse().map_err(|_| bad())?,
    })
}

/// Parses a fit window `t_min:t_max`.
fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad =
        || Error::InvalidConfig(format!("cannot parse window '{s}' (want T_MIN:T_MAX)"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn require<T>(flag: Option<T>, base: Option<T>, name: &str) -> Result<T> {
    flag.or(base).ok_or_else(|| Error::InvalidConfig(format!("{name} is required")))
}

/// Loads `--config` (file or manifest) and checks it describes the invoked
/// subcommand.
fn base_config<F, C>(path: &Option<PathBuf>, expected: &str, pick: F) -> Result<Option<C>>
where
    F: FnOnce(RunConfig) -> Option<C>,
{
    match path {
        None => Ok(None),
        Some(p) => {
            let loaded = load_config_file(p)?;
            let name = loaded.experiment_name();
            pick(loaded).map(Some).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "config file {} describes a '{name}' run, expected '{expected}'",
                    p.display()
                ))
            })
        }
    }
}

#[derive(Args)]
struct TfimArgs {
    /// JSON run config or manifest to start from (flags override)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of qubits in the chain
    #[arg(long)]
    qubits: Option<usize>,
    /// Ising coupling J' (disorder center when --width > 0)
    #[arg(long)]
    coupling: Option<f64>,
    /// Disorder width ΔJ' (0 = homogeneous chain)
    #[arg(long)]
    width: Option<f64>,
    /// Base seed of the disorder ensemble
    #[arg(long)]
    seed: Option<u64>,
    /// Which disorder configuration to draw
    #[arg(long = "config-index")]
    config_index: Option<u64>,
    /// Comma-separated times in units of τ
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// Uniform time grid START:STOP:COUNT
    #[arg(long = "time-grid")]
    time_grid: Option<String>,
    /// Site window A..B (default: the whole chain)
    #[arg(long)]
    sites: Option<SiteRange>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
}

impl TfimArgs {
    fn into_config(self) -> Result<RunConfig> {
        let base = base_config(&self.config, "tfim", |c| match c {
            RunConfig::Tfim(cfg) => Some(cfg),
            _ => None,
        })?;
        let b = base.as_ref();
        Ok(RunConfig::Tfim(TfimConfig {
            qubits: require(self.qubits, b.map(|c| c.qubits), "--qubits")?,
            coupling: require(self.coupling, b.map(|c| c.coupling), "--coupling")?,
            width: self.width.or(b.map(|c| c.width)).unwrap_or(0.0),
            seed: self.seed.or(b.map(|c| c.seed)).unwrap_or(0),
            config_index: self.config_index.or(b.map(|c| c.config_index)).unwrap_or(0),
            times: merge_times(self.times, self.time_grid, base.as_ref().map(|c| c.times.clone()))?,
            sites: self.sites.or(b.and_then(|c| c.sites)),
            out: require(self.out, base.map(|c| c.out), "--out")?,
        }))
    }
}

#[derive(Args)]
struct TbArgs {
    /// JSON run config or manifest to start from (flags override)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of lattice sites
    #[arg(long)]
    length: Option<usize>,
    /// Hopping center in units of γ₀
    #[arg(long)]
    center: Option<f64>,
    /// Hopping disorder width Δγ/γ₀ (0 = uniform chain)
    #[arg(long)]
    width: Option<f64>,
    /// Base seed of the disorder ensemble
    #[arg(long)]
    seed: Option<u64>,
    /// Which disorder configuration to draw
    #[arg(long = "config-index")]
    config_index: Option<u64>,
    /// Comma-separated times in units of τ
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// Uniform time grid START:STOP:COUNT
    #[arg(long = "time-grid")]
    time_grid: Option<String>,
    /// Site window A..B (default: the whole chain)
    #[arg(long)]
    sites: Option<SiteRange>,
    /// Output stem: writes <stem>.P.csv and <stem>.P_R.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

impl TbArgs {
    fn into_config(self) -> Result<RunConfig> {
        let base = base_config(&self.config, "tb", |c| match c {
            RunConfig::Tb(cfg) => Some(cfg),
            _ => None,
        })?;
        let b = base.as_ref();
        Ok(RunConfig::Tb(TbConfig {
            length: require(self.length, b.map(|c| c.length), "--length")?,
            center: self.center.or(b.map(|c| c.center)).unwrap_or(1.0),
            width: self.width.or(b.map(|c| c.width)).unwrap_or(0.0),
            seed: self.seed.or(b.map(|c| c.seed)).unwrap_or(0),
            config_index: self.config_index.or(b.map(|c| c.config_index)).unwrap_or(0),
            times: merge_times(self.times, self.time_grid, base.as_ref().map(|c| c.times.clone()))?,
            sites: self.sites.or(b.and_then(|c| c.sites)),
            out: require(self.out, base.map(|c| c.out), "--out")?,
        }))
    }
}

#[derive(Args)]
struct EnsembleArgs {
    /// JSON run config or manifest to start from (flags override)
    #[arg(long)]
    config: Option<PathBuf>,
    /// What to average: tfim (C̄_k) or tb (P̄, P̄_R)
    #[arg(long, value_enum)]
    model: Option<EnsembleModel>,
    /// Chain size for --model tfim
    #[arg(long)]
    qubits: Option<usize>,
    /// Chain size for --model tb
    #[arg(long)]
    length: Option<usize>,
    /// Disorder center (J'₀, or hopping center in units of γ₀)
    #[arg(long)]
    center: Option<f64>,
    /// Disorder width (ΔJ', or Δγ/γ₀)
    #[arg(long)]
    width: Option<f64>,
    /// Number of disorder configurations N_c
    #[arg(long)]
    configs: Option<usize>,
    /// Base seed of the ensemble
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated times in units of τ
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// Uniform time grid START:STOP:COUNT
    #[arg(long = "time-grid")]
    time_grid: Option<String>,
    /// Site window A..B (default: the whole chain)
    #[arg(long)]
    sites: Option<SiteRange>,
    /// Output CSV path (tb model: stem for .P.csv/.P_R.csv)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl EnsembleArgs {
    fn into_config(self) -> Result<RunConfig> {
        let base = base_config(&self.config, "ensemble", |c| match c {
            RunConfig::Ensemble(cfg) => Some(cfg),
            _ => None,
        })?;
        let b = base.as_ref();
        Ok(RunConfig::Ensemble(EnsembleConfig {
            model: require(self.model, b.map(|c| c.model), "--model")?,
            qubits: self.qubits.or(b.and_then(|c| c.qubits)),
            length: self.length.or(b.and_then(|c| c.length)),
            center: require(self.center, b.map(|c| c.center), "--center")?,
            width: require(self.width, b.map(|c| c.width), "--width")?,
            configs: require(self.configs, b.map(|c| c.configs), "--configs")?,
            seed: self.seed.or(b.map(|c| c.seed)).unwrap_or(0),
            times: merge_times(self.times, self.time_grid, base.as_ref().map(|c| c.times.clone()))?,
            sites: self.sites.or(b.and_then(|c| c.sites)),
            out: require(self.out, base.map(|c| c.out), "--out")?,
        }))
    }
}

#[derive(Args)]
struct AnalyzeCommonArgs {
    /// JSON run config or manifest to start from (flags override)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input CSV field
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output JSON report path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LightconeArgs {
    #[command(flatten)]
    common: AnalyzeCommonArgs,
    /// Comma-separated contour levels (default 1.0,0.9,…,0.4)
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    /// Contour level to fit a straight front to
    #[arg(long = "fit-level")]
    fit_level: Option<f64>,
    /// Fit window T_MIN:T_MAX
    #[arg(long = "fit-window")]
    fit_window: Option<String>,
}

#[derive(Args)]
struct StationarityArgs {
    #[command(flatten)]
    common: AnalyzeCommonArgs,
    /// Second input CSV (late-time field); else both times come from --input
    #[arg(long = "input-b")]
    input_b: Option<PathBuf>,
    /// Early time sample (default: first/latest as appropriate)
    #[arg(long = "time-a")]
    time_a: Option<f64>,
    /// Late time sample
    #[arg(long = "time-b")]
    time_b: Option<f64>,
    /// Max allowed per-site drift (default 0.01)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct KthreshArgs {
    #[command(flatten)]
    common: AnalyzeCommonArgs,
    /// Threshold the profile must drop to
    #[arg(long)]
    threshold: Option<f64>,
    /// Time sample to scan (default: the latest)
    #[arg(long)]
    time: Option<f64>,
}

#[derive(Args)]
struct HssArgs {
    #[command(flatten)]
    common: AnalyzeCommonArgs,
    /// Time sample to fit (default: the latest)
    #[arg(long)]
    time: Option<f64>,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Extract contour lines (and optionally fit a front velocity)
    Lightcone(LightconeArgs),
    /// Compare two late-time profiles site by site
    Stationarity(StationarityArgs),
    /// First site where a profile drops to a threshold
    Kthresh(KthreshArgs),
    /// Fit an exponential envelope K·e^{−α(k−1)} from above
    Hss(HssArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(subcommand)]
    command: AnalyzeCommand,
}

impl AnalyzeArgs {
    fn into_config(self) -> Result<RunConfig> {
        let (common, kind) = match &self.command {
            AnalyzeCommand::Lightcone(a) => (&a.common, AnalysisKind::Lightcone),
            AnalyzeCommand::Stationarity(a) => (&a.common, AnalysisKind::Stationarity),
            AnalyzeCommand::Kthresh(a) => (&a.common, AnalysisKind::Kthresh),
            AnalyzeCommand::Hss(a) => (&a.common, AnalysisKind::Hss),
        };
        let base = base_config(&common.config, "analyze", |c| match c {
            RunConfig::Analyze(cfg) => Some(cfg),
            _ => None,
        })?;
        if let Some(b) = &base {
            if b.analysis != kind {
                return Err(Error::InvalidConfig(
                    "config file describes a different analysis kind".into(),
                ));
            }
        }
        let b = base.as_ref();
        let mut cfg = AnalyzeConfig {
            analysis: kind,
            input: require(common.input.clone(), b.map(|c| c.input.clone()), "--input")?,
            input_b: b.and_then(|c| c.input_b.clone()),
            levels: b.and_then(|c| c.levels.clone()),
            fit_level: b.and_then(|c| c.fit_level),
            fit_window: b.and_then(|c| c.fit_window),
            tol: b.and_then(|c| c.tol),
            threshold: b.and_then(|c| c.threshold),
            time: b.and_then(|c| c.time),
            time_a: b.and_then(|c| c.time_a),
            time_b: b.and_then(|c| c.time_b),
            out: require(common.out.clone(), b.map(|c| c.out.clone()), "--out")?,
        };
        match self.command {
            AnalyzeCommand::Lightcone(a) => {
                cfg.levels = a.levels.or(cfg.levels);
                cfg.fit_level = a.fit_level.or(cfg.fit_level);
                if let Some(w) = a.fit_window {
                    cfg.fit_window = Some(parse_window(&w)?);
                }
            }
            AnalyzeCommand::Stationarity(a) => {
                cfg.input_b = a.input_b.or(cfg.input_b);
                cfg.time_a = a.time_a.or(cfg.time_a);
                cfg.time_b = a.time_b.or(cfg.time_b);
                cfg.tol = a.tol.or(cfg.tol);
            }
            AnalyzeCommand::Kthresh(a) => {
                cfg.threshold = a.threshold.or(cfg.threshold);
                cfg.time = a.time.or(cfg.time);
            }
            AnalyzeCommand::Hss(a) => {
                cfg.time = a.time.or(cfg.time);
            }
        }
        Ok(RunConfig::Analyze(cfg))
    }
}

#[derive(Args)]
struct OracleCheckArgs {
    /// JSON run config or manifest to start from (flags override)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Largest chain size drawn (2..=12)
    #[arg(long)]
    qubits: Option<usize>,
    /// Number of random chains to compare
    #[arg(long)]
    trials: Option<usize>,
    /// Seed of the trial stream
    #[arg(long)]
    seed: Option<u64>,
    /// Max allowed |walk − oracle| (exit 3 beyond it)
    #[arg(long)]
    tol: Option<f64>,
    /// Times are drawn from [0, T_MAX)
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Couplings are drawn from [0, J_MAX)
    #[arg(long = "coupling-max")]
    coupling_max: Option<f64>,
    /// Optional path for the JSON report
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OracleCheckArgs {
    fn into_config(self) -> Result<RunConfig> {
        let base = base_config(&self.config, "oracle-check", |c| match c {
            RunConfig::OracleCheck(cfg) => Some(cfg),
            _ => None,
        })?;
        let b = base.as_ref();
        Ok(RunConfig::OracleCheck(OracleCheckConfig {
            qubits: self.qubits.or(b.map(|c| c.qubits)).unwrap_or_else(default_oracle_qubits),
            trials: self.trials.or(b.map(|c| c.trials)).unwrap_or_else(default_oracle_trials),
            seed: self.seed.or(b.map(|c| c.seed)).unwrap_or_else(default_oracle_seed),
            tol: self.tol.or(b.map(|c| c.tol)).unwrap_or_else(default_oracle_tol),
            t_max: self.t_max.or(b.map(|c| c.t_max)).unwrap_or_else(default_oracle_t_max),
            coupling_max: self
                .coupling_max
                .or(b.map(|c| c.coupling_max))
                .unwrap_or_else(default_oracle_coupling_max),
            out: self.out.or(base.and_then(|c| c.out)),
        }))
    }
}

#[derive(Args)]
struct LabelsArgs {
    /// Number of qubits in the chain
    #[arg(long)]
    qubits: usize,
}

impl Command {
    fn into_config(self) -> Result<RunConfig> {
        match self {
            Command::Tfim(a) => a.into_config(),
            Command::Tb(a) => a.into_config(),
            Command::Ensemble(a) => a.into_config(),
            Command::Analyze(a) => a.into_config(),
            Command::OracleCheck(a) => a.into_config(),
            Command::Labels(a) => Ok(RunConfig::Labels(LabelsConfig { qubits: a.qubits })),
        }
    }
}

/// Applies `LRCHAIN_THREADS` to the global worker pool. Must run before any
/// parallel work; a second call is a no-op.
pub fn init_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("LRCHAIN_THREADS") {
        let n: usize = raw.trim().parse().map_err(|_| {
            Error::InvalidConfig(format!("LRCHAIN_THREADS must be a positive integer, got '{raw}'"))
        })?;
        if n == 0 {
            return Err(Error::InvalidConfig(
                "LRCHAIN_THREADS must be a positive integer, got '0'".into(),
            ));
        }
        // A failure here means a pool already exists (tests, library use);
        // that pool wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn report_error(e: &Error) -> std::process::ExitCode {
    let line = serde_json::json!({ "category": e.category(), "message": e.to_string() });
    eprintln!("{line}");
    std::process::ExitCode::from(e.exit_code() as u8)
}

/// Entry point of the `lrchain` binary.
pub fn main() -> std::process::ExitCode {
    if let Err(e) = init_threads() {
        return report_error(&e);
    }
    let cli = Cli::parse();
    let config = match cli.command.into_config() {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    match run(&config) {
        Ok(outcome) => {
            if let Some(payload) = outcome.stdout_payload {
                println!("{payload}");
            }
            match outcome.failure {
                Some(e) => report_error(&e),
                None => std::process::ExitCode::SUCCESS,
            }
        }
        Err(e) => report_error(&e),
    }
}
