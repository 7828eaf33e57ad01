//! Post-processing of correlation fields: quasiparticle dispersion and
//! front velocity, light-cone contour extraction and velocity fits,
//! late-time stationarity checks, threshold localization lengths, and
//! exponential (Hastings–Koma-style) envelope fits.
//!
//! Everything here consumes [`CorrelationField`] values produced by the
//! walk, the tight-binding propagator, or an ensemble average; nothing
//! re-runs dynamics.

use crate::error::{Error, Result};
use crate::field::{CorrelationField, Quantity};
use serde::{Deserialize, Serialize};

/// Quasiparticle energy (in units of the transverse-field scale γ) of the
/// homogeneous transverse-field Ising chain at momentum `q`:
///
/// ```text
/// E(q)/γ = 2 √(1 + J'² − 2 J' cos q)
/// ```
///
/// This is the standard free-fermion dispersion written in a form that is
/// numerically stable near `q = 0` where it reduces to `2|1 − J'|` (the gap,
/// which closes at the critical coupling `J' = 1`).
pub fn quasiparticle_energy(j_prime: f64, q: f64) -> Result<f64> {
    if !j_prime.is_finite() || j_prime <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "dispersion needs a finite coupling J' > 0, got {j_prime}"
        )));
    }
    if !q.is_finite() {
        return Err(Error::InvalidSpec(format!("momentum must be finite, got {q}")));
    }
    // 1 + J'² − 2J'cos q = (1 − J')² + 2J'(1 − cos q) ≥ 0, with the second
    // form immune to cancellation near q = 0.
    let arg = (1.0 - j_prime) * (1.0 - j_prime) + 2.0 * j_prime * (1.0 - q.cos());
    Ok(2.0 * arg.max(0.0).sqrt())
}

/// Maximum quasiparticle group velocity in sites per Lieb–Robinson time τ:
/// `v·τ = 2π·min(J', 1)`. This is the slope of the ballistic correlation
/// front; it saturates at `2π` for couplings at and beyond critical.
pub fn front_velocity(j_prime: f64) -> Result<f64> {
    if !j_prime.is_finite() || j_prime < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "front velocity needs a finite coupling J' ≥ 0, got {j_prime}"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * j_prime.min(1.0))
}

/// Contour lines of a correlation field: for each level `c` and each time,
/// the largest site position where the field still reaches `c`.
///
/// Crossings are stored level-major (`crossings[li * times.len() + ti]`);
/// `None` means the contour is absent at that time (the field never reaches
/// the level). Positions are fractional sites: linear interpolation between
/// the last listed site at or above the level and the next listed site.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LightCone {
    pub quantity: Quantity,
    pub levels: Vec<f64>,
    pub times: Vec<f64>,
    /// Largest site listed in the source field (sets the fit guard).
    pub max_site: usize,
    pub crossings: Vec<Option<f64>>,
}

impl LightCone {
    /// Crossing position of level `li` at time index `ti`.
    pub fn crossing(&self, li: usize, ti: usize) -> Option<f64> {
        self.crossings[li * self.times.len() + ti]
    }
}

/// Extracts light-cone contours at the given levels.
///
/// Each level must lie in `(0, max]` where `max` is the field quantity's
/// largest attainable value (2 for commutator norms, 1 for probabilities).
/// For monotone quantities the crossing is unique; for plain `P` it is the
/// outermost position at the level.
pub fn extract_lightcone(field: &CorrelationField, levels: &[f64]) -> Result<LightCone> {
    if levels.is_empty() {
        return Err(Error::InvalidSpec("contour extraction needs at least one level".into()));
    }
    let max = field.quantity().max_value();
    for &c in levels {
        if !c.is_finite() || c <= 0.0 || c > max {
            return Err(Error::InvalidSpec(format!(
                "contour level must lie in (0, {max}], got {c}"
            )));
        }
    }
    let sites = field.sites();
    let n_t = field.times().len();
    let mut crossings = Vec::with_capacity(levels.len() * n_t);
    for &c in levels {
        for ti in 0..n_t {
            let profile = field.profile(ti);
            // Largest listed site still at or above the level.
            let hit = (0..sites.len()).rev().find(|&si| profile[si] >= c);
            crossings.push(hit.map(|si| {
                if si + 1 == sites.len() {
                    // Contour runs off the listed window; report the edge.
                    sites[si] as f64
                } else {
                    let (k0, k1) = (sites[si] as f64, sites[si + 1] as f64);
                    let (v0, v1) = (profile[si], profile[si + 1]);
                    // v0 ≥ c > v1 by construction, so the denominator is > 0.
                    k0 + (v0 - c) / (v0 - v1) * (k1 - k0)
                }
            }));
        }
    }
    Ok(LightCone {
        quantity: field.quantity(),
        levels: levels.to_vec(),
        times: field.times().to_vec(),
        max_site: *sites.last().expect("fields are never empty"),
        crossings,
    })
}

/// Crossings beyond this fraction of the largest listed site are excluded
/// from velocity fits: near the far end of the chain the reflected front
/// contaminates the contour.
pub const MAX_SITE_FRACTION: f64 = 0.8;

/// A least-squares front-velocity fit `x(t) ≈ velocity·t + intercept`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontFit {
    pub level: f64,
    pub velocity: f64,
    pub intercept: f64,
    /// Crossings that actually entered the fit after the window and
    /// end-of-chain guards.
    pub n_points: usize,
    pub window: (f64, f64),
}

/// Fits a straight line to one contour of a light cone over the time window
/// `[window.0, window.1]`.
///
/// Times where the contour is absent are skipped (the front has not yet
/// emerged), as are crossings beyond [`MAX_SITE_FRACTION`] of the largest
/// listed site (end-of-chain reflections). At least two usable points at
/// distinct times are required.
pub fn fit_front_velocity(cone: &LightCone, level: f64, window: (f64, f64)) -> Result<FrontFit> {
    let (t0, t1) = window;
    if !t0.is_finite() || !t1.is_finite() || t0 >= t1 {
        return Err(Error::InvalidSpec(format!(
            "fit window must satisfy t_min < t_max, got [{t0}, {t1}]"
        )));
    }
    let li = cone
        .levels
        .iter()
        .position(|&c| c == level || (c - level).abs() < 1e-12)
        .ok_or_else(|| {
            Error::InvalidSpec(format!("level {level} is not among the extracted contours"))
        })?;
    let guard = MAX_SITE_FRACTION * cone.max_site as f64;
    let points: Vec<(f64, f64)> = cone
        .times
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t >= t0 && t <= t1)
        .filter_map(|(ti, &t)| cone.crossing(li, ti).map(|x| (t, x)))
        .filter(|&(_, x)| x <= guard)
        .collect();
    if points.len() < 2 {
        return Err(Error::Numerical(format!(
            "velocity fit needs at least two crossings in [{t0}, {t1}] below the \
             end-of-chain guard, found {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let t_mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let x_mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut stt = 0.0;
    let mut stx = 0.0;
    for &(t, x) in &points {
        stt += (t - t_mean) * (t - t_mean);
        stx += (t - t_mean) * (x - x_mean);
    }
    if stt == 0.0 {
        return Err(Error::Numerical("velocity fit needs crossings at distinct times".into()));
    }
    let velocity = stx / stt;
    Ok(FrontFit {
        level,
        velocity,
        intercept: x_mean - velocity * t_mean,
        n_points: points.len(),
        window,
    })
}

/// Result of comparing a field at two times site by site.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationarityReport {
    pub time_early: f64,
    pub time_late: f64,
    pub tol: f64,
    pub max_abs_diff: f64,
    /// Site where the difference is largest.
    pub worst_site: usize,
    pub pass: bool,
}

/// Compares two single-time snapshots of the same quantity on the same
/// sites: stationary means the profiles agree to `tol` at every site.
/// Reduce multi-time fields with [`CorrelationField::at_time_index`] first.
pub fn stationarity_check(
    early: &CorrelationField,
    late: &CorrelationField,
    tol: f64,
) -> Result<StationarityReport> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidSpec(format!("tolerance must be positive, got {tol}")));
    }
    if early.times().len() != 1 || late.times().len() != 1 {
        return Err(Error::InvalidSpec(
            "stationarity compares single-time snapshots; select a time first".into(),
        ));
    }
    if early.sites() != late.sites() {
        return Err(Error::InvalidSpec("stationarity needs identical site grids".into()));
    }
    if early.quantity() != late.quantity() {
        return Err(Error::InvalidSpec(format!(
            "stationarity compares like with like, got {} vs {}",
            early.quantity().column_name(),
            late.quantity().column_name()
        )));
    }
    let (ta, tb) = (early.times()[0], late.times()[0]);
    if ta == tb {
        return Err(Error::InvalidSpec("stationarity needs two distinct times".into()));
    }
    let mut max_abs_diff = 0.0f64;
    let mut worst_site = early.sites()[0];
    for (si, &k) in early.sites().iter().enumerate() {
        let d = (early.value(si, 0) - late.value(si, 0)).abs();
        if d > max_abs_diff {
            max_abs_diff = d;
            worst_site = k;
        }
    }
    Ok(StationarityReport {
        time_early: ta.min(tb),
        time_late: ta.max(tb),
        tol,
        max_abs_diff,
        worst_site,
        pass: max_abs_diff <= tol,
    })
}

/// Where a profile first drops to a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum ThresholdOutcome {
    /// First listed site whose value is at or below the threshold.
    Reached { k_thresh: usize },
    /// The profile stays above the threshold across the whole listed window.
    Saturated,
}

impl ThresholdOutcome {
    /// Numeric view for ordering comparisons (`Saturated` sorts above every
    /// finite site).
    pub fn as_ordinal(&self) -> usize {
        match *self {
            ThresholdOutcome::Reached { k_thresh } => k_thresh,
            ThresholdOutcome::Saturated => usize::MAX,
        }
    }
}

/// Threshold localization length of one late-time profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KThreshReport {
    pub threshold: f64,
    /// Time of the profile that was scanned (the last time in the field).
    pub time: f64,
    pub outcome: ThresholdOutcome,
    /// When the field carries at least two times: max-abs difference
    /// between the last two profiles, as a stationarity hint. The scan
    /// itself runs regardless — a drifting profile is flagged, not refused.
    pub drift_between_last_two_times: Option<f64>,
}

/// Scans the latest profile of the field for the first site at or below
/// `threshold`. The threshold must lie strictly between 0 and the quantity's
/// maximum. An identically zero profile yields the first listed site.
pub fn localization_length(field: &CorrelationField, threshold: f64) -> Result<KThreshReport> {
    let max = field.quantity().max_value();
    if !threshold.is_finite() || threshold <= 0.0 || threshold >= max {
        return Err(Error::InvalidSpec(format!(
            "threshold must lie in (0, {max}), got {threshold}"
        )));
    }
    let n_t = field.times().len();
    let last = field.profile(n_t - 1);
    let outcome = field
        .sites()
        .iter()
        .enumerate()
        .find(|&(si, _)| last[si] <= threshold)
        .map(|(_, &k)| ThresholdOutcome::Reached { k_thresh: k })
        .unwrap_or(ThresholdOutcome::Saturated);
    let drift = (n_t >= 2).then(|| {
        let prev = field.profile(n_t - 2);
        prev.iter().zip(last).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max)
    });
    Ok(KThreshReport {
        threshold,
        time: field.times()[n_t - 1],
        outcome,
        drift_between_last_two_times: drift,
    })
}

/// Values at or below this floor are treated as numerically zero when
/// fitting exponential envelopes.
pub const ENVELOPE_FLOOR: f64 = 1e-12;

/// Decay rate of a fitted exponential envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "alpha_kind", content = "alpha")]
pub enum HssAlpha {
    /// Envelope `K·e^{−α(k−1)}` with this α.
    Decay(f64),
    /// Every site beyond the first sits at or below the floor: any decay
    /// rate bounds the data, so α is reported as unbounded rather than a
    /// number.
    Unbounded,
}

/// An exponential envelope `C̄_k ≤ K·e^{−α(k−1)}` fitted from above.
///
/// `K` is pinned to the profile at site 1 and α is the largest rate that
/// keeps the envelope above every retained point — the fit touches the
/// slowest-decaying site and bounds all others, in the spirit of a
/// Lieb–Robinson/Hastings–Koma bound rather than a least-squares fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HssFit {
    /// Envelope amplitude `K = C̄_1` at the scanned time.
    pub amplitude: f64,
    pub alpha: HssAlpha,
    /// Sites `k ≥ 2` above the floor that constrained α.
    pub n_retained: usize,
    pub floor: f64,
}

/// Fits the exponential envelope to the latest profile of the field.
///
/// The site grid must start at site 1 (the envelope is anchored there).
/// Sites at or below [`ENVELOPE_FLOOR`] are dropped; if nothing beyond
/// site 1 survives, α is [`HssAlpha::Unbounded`]. The returned envelope is
/// verified to bound every retained point.
pub fn hss_fit(field: &CorrelationField) -> Result<HssFit> {
    let sites = field.sites();
    if sites[0] != 1 {
        return Err(Error::InvalidSpec(format!(
            "envelope fit anchors at site 1, but the field starts at site {}",
            sites[0]
        )));
    }
    let last = field.profile(field.times().len() - 1);
    let amplitude = last[0];
    if amplitude < 0.0 || !amplitude.is_finite() {
        return Err(Error::Numerical(format!(
            "envelope amplitude must be a finite non-negative value, got {amplitude}"
        )));
    }
    let retained: Vec<(usize, f64)> = sites
        .iter()
        .zip(last)
        .skip(1)
        .filter(|&(_, &v)| v > ENVELOPE_FLOOR)
        .map(|(&k, &v)| (k, v))
        .collect();
    if amplitude <= ENVELOPE_FLOOR || retained.is_empty() {
        return Ok(HssFit {
            amplitude,
            alpha: HssAlpha::Unbounded,
            n_retained: 0,
            floor: ENVELOPE_FLOOR,
        });
    }
    let alpha = retained
        .iter()
        .map(|&(k, v)| (amplitude / v).ln() / (k as f64 - 1.0))
        .fold(f64::INFINITY, f64::min);
    // The rate came from the minimizing site, so the envelope bounds every
    // retained point by construction; verify against round-off anyway.
    for &(k, v) in &retained {
        let envelope = amplitude * (-alpha * (k as f64 - 1.0)).exp();
        if v > envelope * (1.0 + 1e-9) {
            return Err(Error::Numerical(format!(
                "fitted envelope fails at site {k}: value {v} > envelope {envelope}"
            )));
        }
    }
    Ok(HssFit {
        amplitude,
        alpha: HssAlpha::Decay(alpha),
        n_retained: retained.len(),
        floor: ENVELOPE_FLOOR,
    })
}

/// One disorder width in a localization scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalizationEntry {
    pub width: f64,
    pub outcome: ThresholdOutcome,
    pub hss: Option<HssFit>,
}

/// Localization scan across disorder widths at a fixed threshold and time:
/// collects `k_thresh` (and optionally an envelope fit) per width.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub threshold: f64,
    pub time: f64,
    pub entries: Vec<LocalizationEntry>,
}

impl LocalizationReport {
    pub fn new(threshold: f64, time: f64) -> Self {
        LocalizationReport { threshold, time, entries: Vec::new() }
    }

    pub fn push(&mut self, width: f64, outcome: ThresholdOutcome, hss: Option<HssFit>) {
        self.entries.push(LocalizationEntry { width, outcome, hss });
    }

    /// True when `k_thresh` strictly decreases across the entries in order
    /// (stronger disorder localizes harder). `Saturated` sorts above every
    /// finite site, so a saturated-then-reached sequence counts as
    /// decreasing while two saturated entries in a row do not.
    pub fn k_thresh_strictly_decreasing(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[0].outcome.as_ordinal() > w[1].outcome.as_ordinal())
    }
}
