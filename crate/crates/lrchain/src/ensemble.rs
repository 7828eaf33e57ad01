//! Reproducible disorder ensembles: uniform coupling/hopping disorder,
//! counter-based per-configuration random streams, and deterministic
//! configuration averages.
//!
//! Configuration `i` draws its couplings from a ChaCha8 stream keyed by
//! `(base_seed, i)` (`set_stream`): every configuration is individually
//! reproducible without generating its predecessors, so ensembles can run
//! in parallel or be spot-checked one configuration at a time. Averages are
//! accumulated in a fixed order — plain ascending configuration index up to
//! 1000 configurations, a fixed pairwise tree with 64-configuration leaves
//! beyond that — so results are bit-identical across runs and thread counts
//! on the same build. Cross-language bit-identity of the stream is not
//! promised (acceptance checks use statistical tolerances, not golden
//! random numbers).
//!
//! A failed configuration aborts the whole ensemble with its index attached;
//! silently skipping configurations would bias the average.

use crate::chain::{ChainSpec, TbChainSpec};
use crate::error::{Error, Result};
use crate::field::{CorrelationField, FieldSource, Quantity};
use crate::tight_binding::{tb_probabilities, TbPropagator};
use crate::walk;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Uniform disorder: values are drawn from
/// `center + width·(u − ½)`, `u ∈ [0,1)` — a box of the given width centered
/// on `center` (the TFIM `J'₀`, or the hopping center in units of γ₀).
///
/// `width ≤ 2·center` keeps every draw non-negative; at full width the lower
/// edge touches exactly 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDisorderModel")]
pub struct DisorderModel {
    pub center: f64,
    pub width: f64,
    pub n_configs: usize,
    pub base_seed: u64,
}

#[derive(Deserialize)]
struct RawDisorderModel {
    center: f64,
    width: f64,
    n_configs: usize,
    base_seed: u64,
}

impl TryFrom<RawDisorderModel> for DisorderModel {
    type Error = Error;
    fn try_from(raw: RawDisorderModel) -> Result<Self> {
        DisorderModel::new(raw.center, raw.width, raw.n_configs, raw.base_seed)
    }
}

impl DisorderModel {
    pub fn new(center: f64, width: f64, n_configs: usize, base_seed: u64) -> Result<Self> {
        if !center.is_finite() || center < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "disorder center must be finite and ≥ 0, got {center}"
            )));
        }
        if !width.is_finite() || width < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "disorder width must be finite and ≥ 0, got {width}"
            )));
        }
        if width > 2.0 * center {
            return Err(Error::InvalidSpec(format!(
                "width {width} exceeds 2·center = {}; couplings would go negative",
                2.0 * center
            )));
        }
        if n_configs == 0 {
            return Err(Error::InvalidSpec("ensemble needs at least one configuration".into()));
        }
        Ok(DisorderModel { center, width, n_configs, base_seed })
    }
}

/// The couplings of configuration `config_index`: `n_bonds` values drawn
/// left-to-right from the configuration's own random stream. Deterministic
/// in `(base_seed, config_index)`.
pub fn sample_configuration(
    model: &DisorderModel,
    config_index: u64,
    n_bonds: usize,
) -> Result<Vec<f64>> {
    if config_index >= model.n_configs as u64 {
        return Err(Error::InvalidSpec(format!(
            "configuration index {config_index} out of range 0..{}",
            model.n_configs
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.base_seed);
    rng.set_stream(config_index);
    Ok((0..n_bonds)
        .map(|_| model.center + model.width * (rng.gen::<f64>() - 0.5))
        .collect())
}

/// Attaches the failing configuration index to an error without changing
/// its category.
fn with_config_index(e: Error, index: u64) -> Error {
    let tag = |m: String| format!("configuration {index}: {m}");
    match e {
        Error::InvalidSpec(m) => Error::InvalidSpec(tag(m)),
        Error::InvalidConfig(m) => Error::InvalidConfig(tag(m)),
        Error::Numerical(m) => Error::Numerical(tag(m)),
        Error::Io(m) => Error::Io(tag(m)),
    }
}

/// Progress observer: called as `(configurations_done, total)`.
pub type Progress<'a> = dyn Fn(usize, usize) + Sync + 'a;

/// Above this many configurations the accumulation switches from plain
/// ascending-index summation to a fixed pairwise tree (bounds round-off for
/// very large ensembles).
const PAIRWISE_THRESHOLD: usize = 1000;
/// Leaf size of the pairwise tree; leaves are summed sequentially ascending.
const TREE_LEAF: usize = 64;

/// Mean of `eval(0..n_configs)` rows in a deterministic summation order.
/// Rows are evaluated in parallel; the reduction order is fixed regardless
/// of thread count or completion order.
fn average_rows<F>(
    n_configs: usize,
    row_len: usize,
    eval: &F,
    progress: Option<&Progress>,
) -> Result<Vec<f64>>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    use std::sync::atomic::{AtomicUsize, Ordering};
    let done = AtomicUsize::new(0);
    let observed_eval = |i: u64| -> Result<Vec<f64>> {
        let row = eval(i).map_err(|e| with_config_index(e, i))?;
        debug_assert_eq!(row.len(), row_len);
        if let Some(cb) = progress {
            cb(done.fetch_add(1, Ordering::Relaxed) + 1, n_configs);
        }
        Ok(row)
    };

    let sum = if n_configs <= PAIRWISE_THRESHOLD {
        // Ascending-index summation; chunks bound memory while letting each
        // chunk's rows be computed in parallel.
        let mut acc = vec![0.0f64; row_len];
        let mut start = 0usize;
        while start < n_configs {
            let stop = (start + TREE_LEAF).min(n_configs);
            let rows: Vec<Vec<f64>> = (start..stop)
                .into_par_iter()
                .map(|i| observed_eval(i as u64))
                .collect::<Result<_>>()?;
            for row in &rows {
                for (a, &v) in acc.iter_mut().zip(row) {
                    *a += v;
                }
            }
            start = stop;
        }
        acc
    } else {
        tree_sum(0, n_configs as u64, row_len, &observed_eval)?
    };
    Ok(sum.into_iter().map(|s| s / n_configs as f64).collect())
}

/// Fixed-shape pairwise summation over `[lo, hi)`: the split point depends
/// only on the range, so the tree (and therefore the floating-point result)
/// is identical however the branches are scheduled.
fn tree_sum<F>(lo: u64, hi: u64, row_len: usize, eval: &F) -> Result<Vec<f64>>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    if (hi - lo) as usize <= TREE_LEAF {
        let mut acc = vec![0.0f64; row_len];
        for i in lo..hi {
            let row = eval(i)?;
            for (a, &v) in acc.iter_mut().zip(&row) {
                *a += v;
            }
        }
        return Ok(acc);
    }
    let mid = lo + (hi - lo) / 2;
    let (left, right) = rayon::join(
        || tree_sum(lo, mid, row_len, eval),
        || tree_sum(mid, hi, row_len, eval),
    );
    let mut left = left?;
    for (a, v) in left.iter_mut().zip(right?) {
        *a += v;
    }
    Ok(left)
}

fn validate_grid(times: &[f64], sites: &[usize], n_sites_max: usize) -> Result<()> {
    if times.is_empty() || sites.is_empty() {
        return Err(Error::InvalidSpec("ensemble needs non-empty time and site grids".into()));
    }
    for &k in sites {
        if k == 0 || k > n_sites_max {
            return Err(Error::InvalidSpec(format!("site {k} out of range 1..={n_sites_max}")));
        }
    }
    Ok(())
}

/// Disorder-averaged `C̄_k(t)` over exactly `model.n_configs` spin-chain
/// configurations of `n_qubits` qubits. One configuration is one chain: its
/// couplings are drawn once and reused across the whole time grid.
pub fn ensemble_average(
    model: &DisorderModel,
    n_qubits: usize,
    times: &[f64],
    sites: &[usize],
) -> Result<CorrelationField> {
    ensemble_average_observed(model, n_qubits, times, sites, None)
}

/// [`ensemble_average`] with an optional progress observer.
pub fn ensemble_average_observed(
    model: &DisorderModel,
    n_qubits: usize,
    times: &[f64],
    sites: &[usize],
    progress: Option<&Progress>,
) -> Result<CorrelationField> {
    if n_qubits == 0 {
        return Err(Error::InvalidSpec("chain needs at least one qubit".into()));
    }
    validate_grid(times, sites, n_qubits)?;
    let row_len = times.len() * sites.len();
    let eval = |i: u64| -> Result<Vec<f64>> {
        let couplings = sample_configuration(model, i, n_qubits - 1)?;
        let wm = walk::build_walk_matrix(ChainSpec::new(n_qubits, couplings, model.center)?)?;
        let mut row = Vec::with_capacity(row_len);
        for &t in times {
            let c_all = walk::site_correlations(&wm, t)?;
            row.extend(sites.iter().map(|&k| c_all[k - 1]));
        }
        Ok(row)
    };
    let values = average_rows(model.n_configs, row_len, &eval, progress)?;
    CorrelationField::new(
        sites.to_vec(),
        times.to_vec(),
        values,
        Quantity::CBar,
        model.n_configs,
        FieldSource::TfimEnsemble { n_qubits, model: model.clone() },
    )
}

/// Disorder-averaged tight-binding probabilities `(P̄, P̄_R)` over hopping
/// disorder. The model's `center` is the hopping center in units of γ₀
/// (1 for the standard setup); `width` is Δγ/γ₀.
pub fn tb_ensemble_average(
    model: &DisorderModel,
    n_sites: usize,
    times: &[f64],
    sites: &[usize],
) -> Result<(CorrelationField, CorrelationField)> {
    tb_ensemble_average_observed(model, n_sites, times, sites, None)
}

/// [`tb_ensemble_average`] with an optional progress observer.
pub fn tb_ensemble_average_observed(
    model: &DisorderModel,
    n_sites: usize,
    times: &[f64],
    sites: &[usize],
    progress: Option<&Progress>,
) -> Result<(CorrelationField, CorrelationField)> {
    if n_sites == 0 {
        return Err(Error::InvalidSpec("tight-binding chain needs at least one site".into()));
    }
    validate_grid(times, sites, n_sites)?;
    let half = times.len() * sites.len();
    // One row carries both quantities: [P | P_R].
    let eval = |i: u64| -> Result<Vec<f64>> {
        let hoppings = sample_configuration(model, i, n_sites - 1)?;
        let prop = TbPropagator::new(TbChainSpec::new(n_sites, hoppings, 1.0)?)?;
        let mut row = vec![0.0f64; 2 * half];
        for (ti, &t) in times.iter().enumerate() {
            let (p, pr) = tb_probabilities(&prop.state_at(t)?);
            for (si, &k) in sites.iter().enumerate() {
                row[ti * sites.len() + si] = p[k - 1];
                row[half + ti * sites.len() + si] = pr[k - 1];
            }
        }
        Ok(row)
    };
    let mut values = average_rows(model.n_configs, 2 * half, &eval, progress)?;
    let pr_values = values.split_off(half);
    let source = FieldSource::TbEnsemble { n_sites, model: model.clone() };
    let p_field = CorrelationField::new(
        sites.to_vec(),
        times.to_vec(),
        values,
        Quantity::P,
        model.n_configs,
        source.clone(),
    )?;
    let pr_field = CorrelationField::new(
        sites.to_vec(),
        times.to_vec(),
        pr_values,
        Quantity::PR,
        model.n_configs,
        source,
    )?;
    Ok((p_field, pr_field))
}
