//! Physical chain descriptions: the spin chain driving the operator walk and
//! the single-particle tight-binding chain used as the localization warm-up.
//!
//! Couplings and hoppings are dimensionless, normalized by the transverse
//! field γ (spin chain) or the baseline hopping γ₀ (tight-binding chain).
//! With that normalization the natural clock is τ = πħ/γ (resp. πħ/γ₀), and
//! every time in this crate is the dimensionless ratio t/τ.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A transverse-field Ising chain of `n_qubits` spins with open boundaries.
///
/// The dimensionless Hamiltonian is
/// `H' = −Σ_k J'_k Z_k Z_{k+1} − Σ_k X_k`
/// with `J'_k = J_k/γ ≥ 0` the bond couplings (`couplings[k-1]` couples sites
/// `k` and `k+1`, sites 1-based). `baseline` records the J'₀ around which the
/// couplings were drawn (equal to every entry for a homogeneous chain); it is
/// provenance only and does not enter any computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_qubits: usize,
    pub couplings: Vec<f64>,
    pub baseline: f64,
}

impl ChainSpec {
    /// Validates and constructs a chain. Couplings must number `n_qubits − 1`,
    /// be finite, and be non-negative (zero is legal: it decouples the chain).
    pub fn new(n_qubits: usize, couplings: Vec<f64>, baseline: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidSpec("chain needs at least one qubit".into()));
        }
        if couplings.len() != n_qubits - 1 {
            return Err(Error::InvalidSpec(format!(
                "{} qubits require {} couplings, got {}",
                n_qubits,
                n_qubits - 1,
                couplings.len()
            )));
        }
        for (i, &j) in couplings.iter().enumerate() {
            if !j.is_finite() {
                return Err(Error::InvalidSpec(format!("coupling {} is not finite", i + 1)));
            }
            if j < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "coupling {} is negative ({j}); the walk weights assume J'_k ≥ 0",
                    i + 1
                )));
            }
        }
        if !baseline.is_finite() || baseline < 0.0 {
            return Err(Error::InvalidSpec("baseline coupling must be finite and ≥ 0".into()));
        }
        Ok(ChainSpec { n_qubits, couplings, baseline })
    }

    /// Homogeneous chain with every bond equal to `coupling`.
    pub fn uniform(n_qubits: usize, coupling: f64) -> Result<Self> {
        let couplings = vec![coupling; n_qubits.saturating_sub(1)];
        ChainSpec::new(n_qubits, couplings, coupling)
    }
}

/// A single-particle tight-binding chain of `n_sites` sites, open boundaries,
/// zero on-site energies.
///
/// `hoppings[k-1] = γ_k/γ₀` is the dimensionless hopping between sites `k`
/// and `k+1`. Entries must be finite and ≥ 0; an exactly-zero hopping severs
/// the chain (this occurs at full disorder width Δγ/γ₀ = 2 and is physical).
/// `baseline` records γ₀ in the caller's energy units (it sets τ = πħ/γ₀ but
/// never enters the dimensionless dynamics).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TbChainSpec {
    pub n_sites: usize,
    pub hoppings: Vec<f64>,
    pub baseline: f64,
}

impl TbChainSpec {
    /// Validates and constructs a tight-binding chain.
    pub fn new(n_sites: usize, hoppings: Vec<f64>, baseline: f64) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidSpec("tight-binding chain needs at least one site".into()));
        }
        if hoppings.len() != n_sites - 1 {
            return Err(Error::InvalidSpec(format!(
                "{} sites require {} hoppings, got {}",
                n_sites,
                n_sites - 1,
                hoppings.len()
            )));
        }
        for (i, &g) in hoppings.iter().enumerate() {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "hopping {} must be finite and ≥ 0, got {g}",
                    i + 1
                )));
            }
        }
        if !baseline.is_finite() || baseline <= 0.0 {
            return Err(Error::InvalidSpec("baseline hopping γ₀ must be finite and > 0".into()));
        }
        Ok(TbChainSpec { n_sites, hoppings, baseline })
    }

    /// Disorder-free chain: every hopping equal to γ₀ (dimensionless 1).
    pub fn uniform(n_sites: usize) -> Result<Self> {
        TbChainSpec::new(n_sites, vec![1.0; n_sites.saturating_sub(1)], 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_spec_validates_lengths_and_signs() {
        assert!(ChainSpec::new(4, vec![0.5, 0.5, 0.5], 0.5).is_ok());
        assert!(ChainSpec::new(1, vec![], 0.0).is_ok(), "single qubit is legal");
        assert!(ChainSpec::new(0, vec![], 0.0).is_err());
        assert!(ChainSpec::new(4, vec![0.5, 0.5], 0.5).is_err(), "wrong coupling count");
        assert!(ChainSpec::new(3, vec![0.5, -0.1], 0.5).is_err(), "negative coupling");
        assert!(ChainSpec::new(3, vec![0.5, f64::NAN], 0.5).is_err(), "NaN coupling");
        assert!(ChainSpec::new(3, vec![0.0, 0.0], 0.0).is_ok(), "zero couplings decouple");
    }

    #[test]
    fn uniform_chain_fills_all_bonds() {
        let spec = ChainSpec::uniform(10, 0.5).unwrap();
        assert_eq!(spec.couplings.len(), 9);
        assert!(spec.couplings.iter().all(|&j| j == 0.5));
        assert_eq!(spec.baseline, 0.5);
    }

    #[test]
    fn tb_spec_accepts_zero_but_not_negative_hoppings() {
        assert!(TbChainSpec::new(3, vec![1.0, 0.0], 1.0).is_ok(), "severed bond is physical");
        assert!(TbChainSpec::new(3, vec![1.0, -0.2], 1.0).is_err());
        assert!(TbChainSpec::new(3, vec![1.0], 1.0).is_err(), "wrong hopping count");
        assert!(TbChainSpec::new(2, vec![1.0], 0.0).is_err(), "γ₀ must be positive");
    }

    #[test]
    fn specs_round_trip_through_json() {
        let spec = ChainSpec::new(3, vec![0.25, 0.75], 0.5).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        let back: ChainSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);

        let tb = TbChainSpec::uniform(5).unwrap();
        let json = serde_json::to_string(&tb).unwrap();
        let back: TbChainSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(tb, back);
    }
}
