//! The sampled correlation field: values of `C`, `C̄`, `P`, or `P_R` on a
//! rectangular (site, time) grid, with provenance.
//!
//! A [`CorrelationField`] is the common currency between the producers
//! (operator walk, exact oracle, tight-binding chain, disorder ensembles)
//! and the consumers (light-cone extraction, stationarity checks,
//! localization analysis, CSV output). Construction validates the physical
//! invariants so downstream code can rely on them:
//!
//! * every value is finite and inside the quantity's range
//!   (`C ∈ [0,2]`, probabilities in `[0,1]`, up to round-off slack);
//! * `C`, `C̄`, and `P_R` are nonincreasing in the site index at fixed time
//!   (tail sums of non-negative terms — the inequality is exact, not
//!   approximate, and averaging preserves it; the one exception is the
//!   brute-force oracle, whose independently computed per-site norms are
//!   allowed round-off-sized slack);
//! * the site and time grids are strictly increasing.

use crate::chain::{ChainSpec, TbChainSpec};
use crate::ensemble::DisorderModel;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which physical quantity a field holds; fixes the CSV value-column name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// Lieb–Robinson correlation `C_k(t)` of a single configuration.
    C,
    /// Disorder-averaged correlation `C̄_k(t)`.
    CBar,
    /// Tight-binding site probability `P(k,t) = |Ψ(k,t)|²`.
    P,
    /// Tight-binding right-of-site probability `P_R(k,t) = Σ_{k'>k} P(k',t)`.
    PR,
}

impl Quantity {
    /// Column header used in CSV artifacts.
    pub fn column_name(self) -> &'static str {
        match self {
            Quantity::C => "C",
            Quantity::CBar => "C_bar",
            Quantity::P => "P",
            Quantity::PR => "P_R",
        }
    }

    /// Inverse of [`Quantity::column_name`].
    pub fn from_column_name(name: &str) -> Result<Self> {
        match name {
            "C" => Ok(Quantity::C),
            "C_bar" => Ok(Quantity::CBar),
            "P" => Ok(Quantity::P),
            "P_R" => Ok(Quantity::PR),
            other => Err(Error::InvalidConfig(format!(
                "unknown quantity column '{other}' (expected C, C_bar, P, or P_R)"
            ))),
        }
    }

    /// Upper bound of the quantity's physical range (lower bound is 0).
    pub fn max_value(self) -> f64 {
        match self {
            Quantity::C | Quantity::CBar => 2.0,
            Quantity::P | Quantity::PR => 1.0,
        }
    }

    /// Whether values must be nonincreasing in the site index at fixed time.
    fn monotone_in_site(self) -> bool {
        !matches!(self, Quantity::P)
    }
}

/// Provenance carried by a field: what produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSource {
    /// One concrete spin chain (homogeneous or a single disorder draw).
    SingleChain { spec: ChainSpec },
    /// Brute-force Heisenberg-picture reference on one spin chain. Each site
    /// is an independently computed operator norm, so the site monotonicity
    /// of `C` holds only to numerical precision, not exactly.
    ExactOracle { spec: ChainSpec },
    /// Disorder average over spin-chain configurations.
    TfimEnsemble { n_qubits: usize, model: DisorderModel },
    /// One concrete tight-binding chain.
    SingleTbChain { spec: TbChainSpec },
    /// Disorder average over tight-binding configurations.
    TbEnsemble { n_sites: usize, model: DisorderModel },
    /// Loaded from an external artifact.
    File { path: String },
}

impl FieldSource {
    /// Permitted site-to-site increase in quantities that are mathematically
    /// nonincreasing. Tail-summed producers (walk, ensembles, tight-binding)
    /// satisfy the inequality exactly in floating point and get no slack;
    /// the oracle's per-site norm estimates get round-off headroom.
    fn monotone_slack(&self) -> f64 {
        match self {
            FieldSource::ExactOracle { .. } => ORACLE_MONOTONE_SLACK,
            _ => 0.0,
        }
    }
}

/// Adjacent-site slack for oracle-sourced fields: generous against the
/// ~1e−13 noise of dense 2^{N_q} linear algebra, far below any real
/// monotonicity violation.
const ORACLE_MONOTONE_SLACK: f64 = 1e-10;

/// Slack for range checks: tail sums inherit the ~1e−10 orthogonality
/// round-off, nothing more.
const RANGE_SLACK: f64 = 1e-8;

#[derive(Deserialize)]
struct RawField {
    sites: Vec<usize>,
    times: Vec<f64>,
    values: Vec<f64>,
    quantity: Quantity,
    ensemble_size: usize,
    source: FieldSource,
}

/// A quantity sampled on a (site, time) grid. Storage is time-major: the
/// site profile at one time is a contiguous slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField")]
pub struct CorrelationField {
    sites: Vec<usize>,
    times: Vec<f64>,
    values: Vec<f64>,
    quantity: Quantity,
    ensemble_size: usize,
    source: FieldSource,
}

impl TryFrom<RawField> for CorrelationField {
    type Error = Error;
    fn try_from(raw: RawField) -> Result<Self> {
        CorrelationField::new(
            raw.sites,
            raw.times,
            raw.values,
            raw.quantity,
            raw.ensemble_size,
            raw.source,
        )
    }
}

impl CorrelationField {
    /// Validates grids, ranges, and site monotonicity, then wraps the data.
    /// `values` is time-major: `values[ti * n_sites + si]`.
    pub fn new(
        sites: Vec<usize>,
        times: Vec<f64>,
        values: Vec<f64>,
        quantity: Quantity,
        ensemble_size: usize,
        source: FieldSource,
    ) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidSpec("field has no sites".into()));
        }
        if times.is_empty() {
            return Err(Error::InvalidSpec("field has no times".into()));
        }
        if sites[0] == 0 {
            return Err(Error::InvalidSpec("site indices are 1-based".into()));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("sites must be strictly increasing".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSpec("times must be finite".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("times must be strictly increasing".into()));
        }
        if values.len() != sites.len() * times.len() {
            return Err(Error::InvalidSpec(format!(
                "field has {} values for a {}×{} grid",
                values.len(),
                sites.len(),
                times.len()
            )));
        }
        if ensemble_size == 0 {
            return Err(Error::InvalidSpec("ensemble size must be ≥ 1".into()));
        }
        let hi = quantity.max_value() + RANGE_SLACK;
        for &v in &values {
            if !v.is_finite() || v < -RANGE_SLACK || v > hi {
                return Err(Error::Numerical(format!(
                    "field value {v} outside [0, {}] for quantity {}",
                    quantity.max_value(),
                    quantity.column_name()
                )));
            }
        }
        if quantity.monotone_in_site() {
            let slack = source.monotone_slack();
            let n_sites = sites.len();
            for (ti, profile) in values.chunks_exact(n_sites).enumerate() {
                if let Some(si) = profile.windows(2).position(|w| w[1] > w[0] + slack) {
                    return Err(Error::Numerical(format!(
                        "{} must be nonincreasing in the site index: sites {} → {} increase \
                         ({} → {}) at time index {}",
                        quantity.column_name(),
                        sites[si],
                        sites[si + 1],
                        profile[si],
                        profile[si + 1],
                        ti
                    )));
                }
            }
        }
        Ok(CorrelationField { sites, times, values, quantity, ensemble_size, source })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn ensemble_size(&self) -> usize {
        self.ensemble_size
    }

    pub fn source(&self) -> &FieldSource {
        &self.source
    }

    /// Raw values, time-major.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at (site index `si`, time index `ti`) — indices into the grids,
    /// not physical site numbers.
    pub fn value(&self, si: usize, ti: usize) -> f64 {
        self.values[ti * self.sites.len() + si]
    }

    /// Site profile at time index `ti` (contiguous, aligned with `sites()`).
    pub fn profile(&self, ti: usize) -> &[f64] {
        let n = self.sites.len();
        &self.values[ti * n..(ti + 1) * n]
    }

    /// Time series at site index `si` (aligned with `times()`).
    pub fn series(&self, si: usize) -> Vec<f64> {
        let n = self.sites.len();
        self.times.iter().enumerate().map(|(ti, _)| self.values[ti * n + si]).collect()
    }

    /// Index of the time sample exactly equal to `t`, if any.
    pub fn time_index(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&x| x == t)
    }

    /// A single-time view of this field (used by the analysis stages that
    /// operate on one late-time profile).
    pub fn at_time_index(&self, ti: usize) -> Result<CorrelationField> {
        if ti >= self.times.len() {
            return Err(Error::InvalidConfig(format!(
                "time index {ti} out of range ({} samples)",
                self.times.len()
            )));
        }
        CorrelationField::new(
            self.sites.clone(),
            vec![self.times[ti]],
            self.profile(ti).to_vec(),
            self.quantity,
            self.ensemble_size,
            self.source.clone(),
        )
    }
}
