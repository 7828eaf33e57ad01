//! Brute-force exact reference for small chains: dense `2^{N_q}` Heisenberg
//! evolution of `Z₁` and the commutator spectral norm, used to validate the
//! operator walk to 1e−8.
//!
//! The dimensionless Hamiltonian `H' = −Σ_k J'_k Z_k Z_{k+1} − Σ_k X_k` is
//! assembled in the computational basis with **site 1 as the leftmost tensor
//! factor**: basis index `a` has the site-k spin in bit `N_q − k` (so site 1
//! is the most significant bit), and `Z_k` reads `+1` for a cleared bit.
//! One real symmetric eigendecomposition `H' = Q E Qᵀ` serves every time:
//!
//! ```text
//! Z₁(t) = Q · e^{iθE} (Qᵀ Z₁ Q) e^{−iθE} · Qᵀ,   θ = π t/τ
//! ```
//!
//! and `C_k(t) = ‖[Z₁(t), Z_k]‖` (spectral norm). Because `Z_k` is diagonal
//! with entries `z = ±1`, the commutator entries are
//! `Ξ_{ab} = G_{ab}(z_b − z_a)` with `G = Z₁(t)`; only the two off-diagonal
//! blocks between the `z = +1` and `z = −1` sectors survive, and
//! `C_k(t) = 2·σ_max(B_k)` with `B_k` the `2^{N_q−1}`-dimensional block
//! `G[z_k = +1, z_k = −1]`. The production path computes that σ_max with the
//! seeded Lanczos iteration; [`commutator_norm_hermitian`] and
//! [`commutator_norm_svd`] keep the two textbook routes (largest |eigenvalue|
//! of the anti-Hermitian commutator, dense SVD) available as cross-checks —
//! the three must agree to 1e−10.

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::field::{CorrelationField, FieldSource, Quantity};
use crate::linalg;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Hard cap on the oracle size: dim 4096 keeps a dense eigendecomposition
/// in the seconds-to-a-minute range, which is the point of a quick check.
pub const MAX_QUBITS: usize = 12;

/// Dense complex operator on the full `2^{N_q}` Hilbert space, stored as
/// separate real and imaginary column-major planes (BLAS-friendly).
#[derive(Debug, Clone)]
pub struct DenseOperator {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry (row, col) as a complex number.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let idx = col * self.dim + row;
        Complex64::new(self.re[idx], self.im[idx])
    }

    /// Column-major real/imaginary planes.
    pub fn planes(&self) -> (&[f64], &[f64]) {
        (&self.re, &self.im)
    }

    /// Largest deviation from Hermiticity, max_{ij} |M_{ij} − conj(M_{ji})|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                let a = self.entry(i, j);
                let b = self.entry(j, i).conj();
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    /// Frobenius distance of `M²` from the identity — zero for an involution
    /// such as a unitarily-evolved Pauli operator.
    pub fn involution_defect(&self) -> f64 {
        let n = self.dim;
        let nn = n * n;
        // (R + iI)² = R² − I² + i(RI + IR)
        let mut sq_re = vec![0.0; nn];
        linalg::gemm(false, false, n, n, n, 1.0, &self.re, &self.re, 0.0, &mut sq_re);
        linalg::gemm(false, false, n, n, n, -1.0, &self.im, &self.im, 1.0, &mut sq_re);
        let mut sq_im = vec![0.0; nn];
        linalg::gemm(false, false, n, n, n, 1.0, &self.re, &self.im, 0.0, &mut sq_im);
        linalg::gemm(false, false, n, n, n, 1.0, &self.im, &self.re, 1.0, &mut sq_im);
        for i in 0..n {
            sq_re[i * n + i] -= 1.0;
        }
        sq_re
            .iter()
            .zip(&sq_im)
            .map(|(&r, &i)| r * r + i * i)
            .sum::<f64>()
            .sqrt()
    }

    /// Trace (real part; imaginary part returned alongside).
    pub fn trace(&self) -> Complex64 {
        let n = self.dim;
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..n {
            t += self.entry(i, i);
        }
        t
    }
}

fn check_size(spec: &ChainSpec) -> Result<usize> {
    if spec.n_qubits > MAX_QUBITS {
        return Err(Error::InvalidSpec(format!(
            "exact oracle is capped at {MAX_QUBITS} qubits (dim {}), got {}",
            1usize << MAX_QUBITS,
            spec.n_qubits
        )));
    }
    Ok(1usize << spec.n_qubits)
}

/// Bit mask selecting site `k` (1-based) in a basis index; site 1 is the
/// most significant bit.
fn site_mask(n_qubits: usize, k: usize) -> usize {
    1usize << (n_qubits - k)
}

/// Diagonal value of `Z_k` on basis state `a`: +1 for a cleared bit.
fn z_value(a: usize, mask: usize) -> f64 {
    if a & mask == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Real symmetric `H'` in the computational basis (column-major). The ZZ
/// couplings are diagonal; each `X_k` contributes −1 between bit-flip pairs.
fn hamiltonian_matrix(spec: &ChainSpec) -> Result<Vec<f64>> {
    let dim = check_size(spec)?;
    let n_q = spec.n_qubits;
    let mut h = vec![0.0f64; dim * dim];
    for a in 0..dim {
        let mut diag = 0.0;
        for (bond, &j) in spec.couplings.iter().enumerate() {
            let k = bond + 1;
            diag -= j * z_value(a, site_mask(n_q, k)) * z_value(a, site_mask(n_q, k + 1));
        }
        h[a * dim + a] = diag;
        for k in 1..=n_q {
            let b = a ^ site_mask(n_q, k);
            h[a * dim + b] -= 1.0; // −X_k, column a → row b
        }
    }
    Ok(h)
}

/// The dense TFIM Hamiltonian as a (real) `DenseOperator`.
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<DenseOperator> {
    let dim = check_size(spec)?;
    let re = hamiltonian_matrix(spec)?;
    Ok(DenseOperator { dim, re, im: vec![0.0; dim * dim] })
}

/// Precomputed spectral data of one chain: eigenbasis of `H'` plus `Z₁`
/// rotated into it. One construction serves any number of times and probe
/// sites — the per-time cost is four real matrix multiplies.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    spec: ChainSpec,
    dim: usize,
    eigenvalues: Vec<f64>,
    q: Vec<f64>,        // eigenvectors, column-major
    z1_tilde: Vec<f64>, // Qᵀ Z₁ Q, column-major
}

impl ExactPropagator {
    pub fn new(spec: ChainSpec) -> Result<Self> {
        let spec = ChainSpec::new(spec.n_qubits, spec.couplings, spec.baseline)?;
        let dim = check_size(&spec)?;
        let mut h = hamiltonian_matrix(&spec)?;
        let eigenvalues = linalg::sym_eigen(&mut h, dim)?;
        let q = h; // dsyev overwrites the input with eigenvectors

        // z̃ = Qᵀ (Z₁ Q); Z₁ is diagonal so Z₁Q is a row scaling of Q.
        let mask = site_mask(spec.n_qubits, 1);
        let mut z1q = q.clone();
        for col in z1q.chunks_exact_mut(dim) {
            for (a, v) in col.iter_mut().enumerate() {
                *v *= z_value(a, mask);
            }
        }
        let mut z1_tilde = vec![0.0; dim * dim];
        linalg::gemm(true, false, dim, dim, dim, 1.0, &q, &z1q, 0.0, &mut z1_tilde);
        Ok(ExactPropagator { spec, dim, eigenvalues, q, z1_tilde })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Eigenvalues of `H'`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `Z₁(t)` as real/imaginary planes: `Q · (e^{iθE} z̃ e^{−iθE}) · Qᵀ`
    /// with the phase factors applied elementwise in the eigenbasis.
    fn heisenberg_planes(&self, t_over_tau: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if !t_over_tau.is_finite() {
            return Err(Error::InvalidSpec(format!("time must be finite, got {t_over_tau}")));
        }
        let n = self.dim;
        let theta = std::f64::consts::PI * t_over_tau;
        let cos_s: Vec<f64> = self.eigenvalues.iter().map(|&e| (theta * e).cos()).collect();
        let sin_s: Vec<f64> = self.eigenvalues.iter().map(|&e| (theta * e).sin()).collect();

        // m̃_{jl} = e^{iθ(λ_j − λ_l)} z̃_{jl}
        let mut m_re = vec![0.0; n * n];
        let mut m_im = vec![0.0; n * n];
        for l in 0..n {
            let (cl, sl) = (cos_s[l], sin_s[l]);
            let zt = &self.z1_tilde[l * n..(l + 1) * n];
            let mr = &mut m_re[l * n..(l + 1) * n];
            let mi = &mut m_im[l * n..(l + 1) * n];
            for j in 0..n {
                let phase_re = cos_s[j] * cl + sin_s[j] * sl;
                let phase_im = sin_s[j] * cl - cos_s[j] * sl;
                mr[j] = zt[j] * phase_re;
                mi[j] = zt[j] * phase_im;
            }
        }

        // Back to the computational basis: G = Q m̃ Qᵀ, plane by plane.
        let mut tmp = vec![0.0; n * n];
        let mut g_re = vec![0.0; n * n];
        linalg::gemm(false, false, n, n, n, 1.0, &self.q, &m_re, 0.0, &mut tmp);
        linalg::gemm(false, true, n, n, n, 1.0, &tmp, &self.q, 0.0, &mut g_re);
        let mut g_im = vec![0.0; n * n];
        linalg::gemm(false, false, n, n, n, 1.0, &self.q, &m_im, 0.0, &mut tmp);
        linalg::gemm(false, true, n, n, n, 1.0, &tmp, &self.q, 0.0, &mut g_im);
        Ok((g_re, g_im))
    }

    /// `Z₁(t)` as a dense operator.
    pub fn heisenberg_z1(&self, t_over_tau: f64) -> Result<DenseOperator> {
        let (re, im) = self.heisenberg_planes(t_over_tau)?;
        Ok(DenseOperator { dim: self.dim, re, im })
    }

    /// `C_k(t) = 2·σ_max(B_k)` from the off-diagonal block of `Z₁(t)` in the
    /// `Z_k` eigensplit.
    pub fn correlation(&self, t_over_tau: f64, k: usize) -> Result<f64> {
        Ok(self.correlations(t_over_tau, &[k])?[0])
    }

    /// Correlations at several probe sites sharing one `Z₁(t)` evaluation.
    pub fn correlations(&self, t_over_tau: f64, sites: &[usize]) -> Result<Vec<f64>> {
        for &k in sites {
            if k == 0 || k > self.spec.n_qubits {
                return Err(Error::InvalidSpec(format!(
                    "site {k} out of range 1..={}",
                    self.spec.n_qubits
                )));
            }
        }
        let (g_re, g_im) = self.heisenberg_planes(t_over_tau)?;
        sites
            .iter()
            .map(|&k| {
                let (b_re, b_im, m) = self.extract_block(&g_re, &g_im, k);
                Ok(2.0 * linalg::sigma_max(&b_re, &b_im, m, m, SIGMA_SEED)?)
            })
            .collect()
    }

    /// Gathers `B_k = G[z_k = +1, z_k = −1]` (each sector has dimension
    /// `2^{N_q−1}` — the bit split is always even).
    fn extract_block(&self, g_re: &[f64], g_im: &[f64], k: usize) -> (Vec<f64>, Vec<f64>, usize) {
        let n = self.dim;
        let mask = site_mask(self.spec.n_qubits, k);
        let plus: Vec<usize> = (0..n).filter(|a| a & mask == 0).collect();
        let minus: Vec<usize> = (0..n).filter(|a| a & mask != 0).collect();
        let m = plus.len();
        let mut b_re = vec![0.0; m * m];
        let mut b_im = vec![0.0; m * m];
        for (cj, &b) in minus.iter().enumerate() {
            let src_col = b * n;
            let dst_col = cj * m;
            for (ri, &a) in plus.iter().enumerate() {
                b_re[dst_col + ri] = g_re[src_col + a];
                b_im[dst_col + ri] = g_im[src_col + a];
            }
        }
        (b_re, b_im, m)
    }

    /// Exact correlation field on a (site, time) grid.
    pub fn correlation_field(&self, times: &[f64], sites: &[usize]) -> Result<CorrelationField> {
        let mut values = Vec::with_capacity(sites.len() * times.len());
        for &t in times {
            values.extend(self.correlations(t, sites)?);
        }
        CorrelationField::new(
            sites.to_vec(),
            times.to_vec(),
            values,
            Quantity::C,
            1,
            FieldSource::ExactOracle { spec: self.spec.clone() },
        )
    }
}

/// Fixed seed for the Lanczos start vectors: the iteration must be
/// deterministic so oracle outputs are reproducible bit-for-bit.
const SIGMA_SEED: u64 = 0x5eed_0f_0c_aa;

/// `Z₁(t)` for a chain (convenience wrapper; builds the propagator).
pub fn heisenberg_z1(spec: &ChainSpec, t_over_tau: f64) -> Result<DenseOperator> {
    ExactPropagator::new(spec.clone())?.heisenberg_z1(t_over_tau)
}

/// `C_k(t)` by brute force (convenience wrapper; builds the propagator).
/// Batch callers should construct [`ExactPropagator`] once instead.
pub fn exact_correlation(spec: &ChainSpec, t_over_tau: f64, k: usize) -> Result<f64> {
    ExactPropagator::new(spec.clone())?.correlation(t_over_tau, k)
}

/// Builds the full commutator `Ξ = [Z₁(t), Z_k]` as dense planes.
fn commutator_planes(prop: &ExactPropagator, t_over_tau: f64, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if k == 0 || k > prop.spec.n_qubits {
        return Err(Error::InvalidSpec(format!(
            "site {k} out of range 1..={}",
            prop.spec.n_qubits
        )));
    }
    let n = prop.dim;
    let (g_re, g_im) = prop.heisenberg_planes(t_over_tau)?;
    let mask = site_mask(prop.spec.n_qubits, k);
    let mut x_re = vec![0.0; n * n];
    let mut x_im = vec![0.0; n * n];
    for b in 0..n {
        let zb = z_value(b, mask);
        for a in 0..n {
            let w = zb - z_value(a, mask);
            x_re[b * n + a] = g_re[b * n + a] * w;
            x_im[b * n + a] = g_im[b * n + a] * w;
        }
    }
    Ok((x_re, x_im))
}

/// Reference route 1: the commutator of Hermitian operators is
/// anti-Hermitian, so `‖Ξ‖` equals the largest |eigenvalue| of the Hermitian
/// matrix `iΞ`. O(dim³) — cross-check use only.
pub fn commutator_norm_hermitian(prop: &ExactPropagator, t_over_tau: f64, k: usize) -> Result<f64> {
    let n = prop.dim;
    let (x_re, x_im) = commutator_planes(prop, t_over_tau, k)?;
    // i(R + iI) = −I + iR
    let h_re: Vec<f64> = x_im.iter().map(|&v| -v).collect();
    let w = linalg::hermitian_eigenvalues(&h_re, &x_re, n)?;
    Ok(w.iter().fold(0.0f64, |acc, &v| acc.max(v.abs())))
}

/// Reference route 2: dense SVD of the commutator; `‖Ξ‖ = σ_max`.
/// O(dim³) — cross-check use only.
pub fn commutator_norm_svd(prop: &ExactPropagator, t_over_tau: f64, k: usize) -> Result<f64> {
    let n = prop.dim;
    let (x_re, x_im) = commutator_planes(prop, t_over_tau, k)?;
    Ok(linalg::singular_values(&x_re, &x_im, n, n)?[0])
}

/// The trial where a randomized agreement run deviated most.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstTrial {
    pub trial: usize,
    pub n_qubits: usize,
    pub t_over_tau: f64,
    pub site: usize,
    pub deviation: f64,
}

/// Outcome of comparing the operator walk against the exact oracle on
/// randomized chains.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgreementReport {
    pub trials: usize,
    pub max_qubits: usize,
    pub t_max: f64,
    pub coupling_max: f64,
    pub seed: u64,
    pub tolerance: f64,
    pub max_abs_deviation: f64,
    pub worst: WorstTrial,
    pub pass: bool,
}

/// Runs `trials` randomized chains and compares `C_k(t)` from the operator
/// walk against the brute-force oracle at every site.
///
/// Each trial draws a size from `2..=max_qubits`, couplings uniformly from
/// `[0, coupling_max)`, and a time from `[0, t_max)`, all from a stream
/// seeded by `seed` (reproducible). The report records the largest absolute
/// deviation and where it occurred; `pass` means it stayed within
/// `tolerance`.
pub fn randomized_agreement(
    max_qubits: usize,
    trials: usize,
    seed: u64,
    t_max: f64,
    coupling_max: f64,
    tolerance: f64,
) -> Result<AgreementReport> {
    if !(2..=MAX_QUBITS).contains(&max_qubits) {
        return Err(Error::InvalidSpec(format!(
            "agreement trials need 2..={MAX_QUBITS} qubits, got {max_qubits}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidSpec("agreement needs at least one trial".into()));
    }
    if !t_max.is_finite() || t_max <= 0.0 || !coupling_max.is_finite() || coupling_max <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "agreement needs positive t_max and coupling_max, got {t_max} and {coupling_max}"
        )));
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidSpec(format!("tolerance must be positive, got {tolerance}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst =
        WorstTrial { trial: 0, n_qubits: 0, t_over_tau: 0.0, site: 0, deviation: -1.0 };
    for trial in 0..trials {
        let n_q = rng.gen_range(2..=max_qubits);
        let couplings: Vec<f64> = (0..n_q - 1).map(|_| coupling_max * rng.gen::<f64>()).collect();
        let t = t_max * rng.gen::<f64>();
        let spec = ChainSpec::new(n_q, couplings, 0.0)?;
        let wm = crate::walk::build_walk_matrix(spec.clone())?;
        let from_walk = crate::walk::site_correlations(&wm, t)?;
        let prop = ExactPropagator::new(spec)?;
        let sites: Vec<usize> = (1..=n_q).collect();
        let from_oracle = prop.correlations(t, &sites)?;
        for (si, (&w, &o)) in from_walk.iter().zip(&from_oracle).enumerate() {
            let dev = (w - o).abs();
            if dev > worst.deviation {
                worst = WorstTrial {
                    trial,
                    n_qubits: n_q,
                    t_over_tau: t,
                    site: si + 1,
                    deviation: dev,
                };
            }
        }
    }
    Ok(AgreementReport {
        trials,
        max_qubits,
        t_max,
        coupling_max,
        seed,
        tolerance,
        max_abs_deviation: worst.deviation,
        pass: worst.deviation <= tolerance,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn single_spin_hamiltonian_is_minus_x() {
        let h = build_hamiltonian(&ChainSpec::uniform(1, 0.0).unwrap()).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.entry(0, 1).re, -1.0);
        assert_eq!(h.entry(1, 0).re, -1.0);
        assert_eq!(h.entry(0, 0).re, 0.0);
        let prop = ExactPropagator::new(ChainSpec::uniform(1, 0.0).unwrap()).unwrap();
        assert!((prop.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((prop.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_factor_ordering_is_site_one_leftmost() {
        // N_q = 2, J' = 0.7: basis order |00⟩,|01⟩,|10⟩,|11⟩ with site 1 the
        // most significant bit. X₁ therefore connects |00⟩ ↔ |10⟩ (indices
        // 0 ↔ 2) and X₂ connects |00⟩ ↔ |01⟩ (0 ↔ 1).
        let h = build_hamiltonian(&ChainSpec::uniform(2, 0.7).unwrap()).unwrap();
        assert_eq!(h.entry(0, 0).re, -0.7, "Z₁Z₂ on |00⟩");
        assert_eq!(h.entry(1, 1).re, 0.7, "Z₁Z₂ on |01⟩");
        assert_eq!(h.entry(2, 2).re, 0.7, "Z₁Z₂ on |10⟩");
        assert_eq!(h.entry(3, 3).re, -0.7, "Z₁Z₂ on |11⟩");
        assert_eq!(h.entry(2, 0).re, -1.0, "X₁ flips the leftmost factor");
        assert_eq!(h.entry(1, 0).re, -1.0, "X₂ flips the rightmost factor");
        assert_eq!(h.entry(3, 0).re, 0.0, "no double flips in H'");
        assert!(h.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn two_qubit_spectrum_matches_the_closed_form() {
        // Parity sectors give {−√(J'²+4), −J', +J', +√(J'²+4)}: the odd
        // sector contributes ±J' ((|01⟩∓|10⟩, |00⟩−|11⟩ combinations), the
        // even sector the 2×2 [[−J',−2],[−2,J']] with eigenvalues ±√(J'²+4).
        for &j in &[1.0, 0.6, 1.7] {
            let prop = ExactPropagator::new(ChainSpec::uniform(2, j).unwrap()).unwrap();
            let want = {
                let big = (j * j + 4.0).sqrt();
                [-big, -j, j, big]
            };
            for (got, want) in prop.eigenvalues().iter().zip(want) {
                assert!((got - want).abs() < 1e-12, "J'={j}: {got} vs {want}");
            }
        }
        // Decoupled pair: free spins, E = ±1 ± 1.
        let prop = ExactPropagator::new(ChainSpec::uniform(2, 0.0).unwrap()).unwrap();
        let want = [-2.0, 0.0, 0.0, 2.0];
        for (got, want) in prop.eigenvalues().iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn heisenberg_z1_at_time_zero_is_z1() {
        let spec = ChainSpec::uniform(3, 0.8).unwrap();
        let z1t = heisenberg_z1(&spec, 0.0).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let want = if a == b { z_value(a, site_mask(3, 1)) } else { 0.0 };
                let got = z1t.entry(a, b);
                assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_spin_heisenberg_rotation_matches_the_walk_sign_convention() {
        // Z(t) = cos(2πt/τ) Z − sin(2πt/τ) Y, i.e. entries
        // [[c, is], [−is, −c]] — the same convention the walk row produces.
        let spec = ChainSpec::uniform(1, 0.0).unwrap();
        for &t in &[0.1, 0.25, 0.8] {
            let z1t = heisenberg_z1(&spec, t).unwrap();
            let (c, s) = ((2.0 * PI * t).cos(), (2.0 * PI * t).sin());
            assert!((z1t.entry(0, 0).re - c).abs() < 1e-13);
            assert!((z1t.entry(1, 1).re + c).abs() < 1e-13);
            assert!((z1t.entry(0, 1).im - s).abs() < 1e-13);
            assert!((z1t.entry(1, 0).im + s).abs() < 1e-13);
            assert!(z1t.entry(0, 0).im.abs() < 1e-13);
            assert!(z1t.entry(0, 1).re.abs() < 1e-13);
        }
    }

    #[test]
    fn evolved_z1_is_a_hermitian_involution_with_balanced_spectrum() {
        // Unitary similarity preserves the ±1 spectrum with equal
        // multiplicity: equivalently Z₁(t)² = 1 and tr Z₁(t) = 0.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let couplings: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..2.0)).collect();
        let spec = ChainSpec::new(4, couplings, 1.0).unwrap();
        for &t in &[0.4, 2.9, 17.0] {
            let z1t = heisenberg_z1(&spec, t).unwrap();
            assert!(z1t.hermiticity_defect() < 1e-12, "Hermiticity at t={t}");
            assert!(z1t.involution_defect() < 1e-10, "Z₁(t)² = 1 at t={t}");
            assert!(z1t.trace().norm() < 1e-10, "balanced spectrum at t={t}");
        }
    }

    #[test]
    fn propagator_is_unitary() {
        // U(t) = Q e^{−iθE} Qᵀ reconstructed from the spectral data;
        // ‖U†U − I‖ must vanish to round-off.
        let spec = ChainSpec::uniform(5, 1.3).unwrap();
        let prop = ExactPropagator::new(spec).unwrap();
        let n = prop.dim();
        let theta = PI * 7.3;
        let mut phased = prop.q.clone(); // Q e^{−iθE}: scale columns
        let mut phased_im = prop.q.clone();
        for (j, col) in phased.chunks_exact_mut(n).enumerate() {
            let c = (theta * prop.eigenvalues[j]).cos();
            for v in col.iter_mut() {
                *v *= c;
            }
        }
        for (j, col) in phased_im.chunks_exact_mut(n).enumerate() {
            let s = -(theta * prop.eigenvalues[j]).sin();
            for v in col.iter_mut() {
                *v *= s;
            }
        }
        let mut u_re = vec![0.0; n * n];
        let mut u_im = vec![0.0; n * n];
        linalg::gemm(false, true, n, n, n, 1.0, &phased, &prop.q, 0.0, &mut u_re);
        linalg::gemm(false, true, n, n, n, 1.0, &phased_im, &prop.q, 0.0, &mut u_im);
        // U†U = (Rᵀ − iIᵀ)(R + iI): real part RᵀR + IᵀI, imag part RᵀI − IᵀR.
        let mut prod_re = vec![0.0; n * n];
        linalg::gemm(true, false, n, n, n, 1.0, &u_re, &u_re, 0.0, &mut prod_re);
        linalg::gemm(true, false, n, n, n, 1.0, &u_im, &u_im, 1.0, &mut prod_re);
        let mut prod_im = vec![0.0; n * n];
        linalg::gemm(true, false, n, n, n, 1.0, &u_re, &u_im, 0.0, &mut prod_im);
        linalg::gemm(true, false, n, n, n, -1.0, &u_im, &u_re, 1.0, &mut prod_im);
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((prod_re[j * n + i] - want).abs()).max(prod_im[j * n + i].abs());
            }
        }
        assert!(defect < 1e-12, "‖U†U − I‖ = {defect}");
    }

    #[test]
    fn correlation_vanishes_at_time_zero_for_distant_sites() {
        let spec = ChainSpec::uniform(5, 1.0).unwrap();
        let prop = ExactPropagator::new(spec).unwrap();
        for k in 2..=5 {
            let c = prop.correlation(0.0, k).unwrap();
            assert!(c.abs() < 1e-10, "C_{k}(0) = {c}");
        }
    }

    #[test]
    fn single_spin_peak_requires_the_spectral_norm() {
        // C₁(t) = 2|sin 2πt/τ| peaks at exactly 2 at t/τ = 1/4; the
        // Frobenius norm would give 2√2 here.
        let spec = ChainSpec::uniform(1, 0.0).unwrap();
        let prop = ExactPropagator::new(spec).unwrap();
        let peak = prop.correlation(0.25, 1).unwrap();
        assert!((peak - 2.0).abs() < 1e-10, "C₁(τ/4) = {peak}");
        for &t in &[0.05, 0.3, 0.6] {
            let c = prop.correlation(t, 1).unwrap();
            assert!((c - 2.0 * (2.0 * PI * t).sin().abs()).abs() < 1e-10);
        }
    }

    #[test]
    fn three_norm_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for &n_q in &[2usize, 3, 5] {
            let couplings: Vec<f64> = (0..n_q - 1).map(|_| rng.gen_range(0.0..2.0)).collect();
            let prop = ExactPropagator::new(ChainSpec::new(n_q, couplings, 1.0).unwrap()).unwrap();
            for &t in &[0.35, 1.8] {
                for k in 1..=n_q {
                    let block = prop.correlation(t, k).unwrap();
                    let herm = commutator_norm_hermitian(&prop, t, k).unwrap();
                    let svd = commutator_norm_svd(&prop, t, k).unwrap();
                    assert!((block - herm).abs() < 1e-10, "block vs iΞ eig: {block} {herm}");
                    assert!((block - svd).abs() < 1e-10, "block vs SVD: {block} {svd}");
                }
            }
        }
    }

    /// Dense matrix of one walk Pauli string (X-prefix then Z or Y), used to
    /// check the adjacency matrix against the actual commutator algebra.
    fn pauli_string_planes(n_q: usize, node: usize) -> (Vec<f64>, Vec<f64>) {
        let dim = 1usize << n_q;
        let site = node / 2 + 1; // terminal site of the string
        let is_y = node % 2 == 1;
        let mut flip = 0usize;
        for s in 1..site {
            flip |= site_mask(n_q, s); // X prefix
        }
        let term_mask = site_mask(n_q, site);
        let mut re = vec![0.0; dim * dim];
        let mut im = vec![0.0; dim * dim];
        for a in 0..dim {
            if is_y {
                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                let b = a ^ flip ^ term_mask;
                let amp = if a & term_mask == 0 { 1.0 } else { -1.0 };
                im[a * dim + b] = amp;
            } else {
                let b = a ^ flip;
                re[a * dim + b] = z_value(a, term_mask);
            }
        }
        (re, im)
    }

    #[test]
    fn walk_adjacency_reproduces_the_commutator_algebra() {
        // [H', σ_m] = 2i Σ_j A_{mj} σ_j for the walk strings σ — this ties
        // the tridiagonal weights and the label ordering to the dense
        // Hamiltonian with no matrix exponentials involved.
        let spec = ChainSpec::new(3, vec![0.3, 0.7], 0.5).unwrap();
        let n_q = 3;
        let dim = 1usize << n_q;
        let h = hamiltonian_matrix(&spec).unwrap();
        let wm = walk::build_walk_matrix(spec).unwrap();
        let a_dense = wm.dense_adjacency();
        let n_walk = wm.dim();

        for m in 0..n_walk {
            let (s_re, s_im) = pauli_string_planes(n_q, m);
            // [H, σ] = Hσ − σH, separately on each plane (H is real).
            let mut comm_re = vec![0.0; dim * dim];
            linalg::gemm(false, false, dim, dim, dim, 1.0, &h, &s_re, 0.0, &mut comm_re);
            linalg::gemm(false, false, dim, dim, dim, -1.0, &s_re, &h, 1.0, &mut comm_re);
            let mut comm_im = vec![0.0; dim * dim];
            linalg::gemm(false, false, dim, dim, dim, 1.0, &h, &s_im, 0.0, &mut comm_im);
            linalg::gemm(false, false, dim, dim, dim, -1.0, &s_im, &h, 1.0, &mut comm_im);

            // 2i Σ_j A_{mj} σ_j: real plane −2 Σ A σ_im, imag plane 2 Σ A σ_re.
            let mut want_re = vec![0.0; dim * dim];
            let mut want_im = vec![0.0; dim * dim];
            for j in 0..n_walk {
                let a_mj = a_dense[j * n_walk + m];
                if a_mj == 0.0 {
                    continue;
                }
                let (sj_re, sj_im) = pauli_string_planes(n_q, j);
                for idx in 0..dim * dim {
                    want_re[idx] -= 2.0 * a_mj * sj_im[idx];
                    want_im[idx] += 2.0 * a_mj * sj_re[idx];
                }
            }
            for idx in 0..dim * dim {
                assert!(
                    (comm_re[idx] - want_re[idx]).abs() < 1e-12
                        && (comm_im[idx] - want_im[idx]).abs() < 1e-12,
                    "commutator algebra mismatch at walk node {m}"
                );
            }
        }
    }

    #[test]
    fn oracle_matches_the_walk_on_a_disordered_chain() {
        // J'₀ = 0.5, ΔJ' = 0.8 draw on six qubits at t/τ = 1.5 — the mutual
        // cross-check between the two completely different evaluations.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let couplings: Vec<f64> = (0..5).map(|_| 0.5 + 0.8 * (rng.gen::<f64>() - 0.5)).collect();
        let spec = ChainSpec::new(6, couplings, 0.5).unwrap();
        let wm = walk::build_walk_matrix(spec.clone()).unwrap();
        let prop = ExactPropagator::new(spec).unwrap();
        let t = 1.5;
        let from_walk = walk::site_correlations(&wm, t).unwrap();
        let sites: Vec<usize> = (1..=6).collect();
        let from_oracle = prop.correlations(t, &sites).unwrap();
        for k in 0..6 {
            assert!(
                (from_walk[k] - from_oracle[k]).abs() < 1e-8,
                "site {}: walk {} vs oracle {}",
                k + 1,
                from_walk[k],
                from_oracle[k]
            );
        }
    }

    #[test]
    fn size_cap_and_site_ranges_are_enforced() {
        assert!(build_hamiltonian(&ChainSpec::uniform(13, 0.5).unwrap()).is_err());
        let prop = ExactPropagator::new(ChainSpec::uniform(3, 0.5).unwrap()).unwrap();
        assert!(prop.correlation(1.0, 0).is_err());
        assert!(prop.correlation(1.0, 4).is_err());
        assert!(prop.correlation(f64::NAN, 1).is_err());
    }

    #[test]
    fn randomized_agreement_passes_and_is_reproducible() {
        let a = randomized_agreement(5, 6, 99, 10.0, 2.0, 1e-8).unwrap();
        assert!(a.pass, "max deviation {}", a.max_abs_deviation);
        assert!(a.max_abs_deviation >= 0.0);
        let b = randomized_agreement(5, 6, 99, 10.0, 2.0, 1e-8).unwrap();
        assert_eq!(a.max_abs_deviation.to_bits(), b.max_abs_deviation.to_bits());
        assert_eq!(a.worst.trial, b.worst.trial);
        // Parameter validation.
        assert!(randomized_agreement(1, 6, 0, 10.0, 2.0, 1e-8).is_err());
        assert!(randomized_agreement(13, 6, 0, 10.0, 2.0, 1e-8).is_err());
        assert!(randomized_agreement(5, 0, 0, 10.0, 2.0, 1e-8).is_err());
        assert!(randomized_agreement(5, 6, 0, -1.0, 2.0, 1e-8).is_err());
        assert!(randomized_agreement(5, 6, 0, 10.0, 2.0, 0.0).is_err());
    }
}
