//! The operator Pauli walk: exact Lieb–Robinson correlations from one row of
//! a structured matrix exponential.
//!
//! Nested commutators of the dimensionless TFIM Hamiltonian
//! `H' = −Σ J'_k Z_k Z_{k+1} − Σ X_k` with `Z₁` never leave the 2N_q-element
//! set of Pauli strings
//!
//! ```text
//! Z₁, Y₁, X₁Z₂, X₁Y₂, X₁X₂Z₃, …, X₁⋯X_{N_q−1}Y_{N_q}
//! ```
//!
//! so Heisenberg evolution of `Z₁` acts on this list as `exp(−θA)` with
//! `θ = 2π t/τ` and `A` the skew-symmetric tridiagonal adjacency matrix whose
//! super-diagonal alternates `[1, J'₁, 1, J'₂, …, 1]` (field terms move
//! within a site, coupling terms hop to the next site). The correlation with
//! a `Z_k` probe is then a tail sum over the walk amplitudes `u = row 1 of
//! exp(−θA)`:
//!
//! ```text
//! C_k(t) = 2·sqrt( Σ_{m ≥ 2k} u_m² )        (m 1-based)
//! ```
//!
//! # Evaluation
//!
//! The diagonal similarity `D = diag(i^m)` maps `A` to `−iT` with `T` real
//! symmetric tridiagonal (same off-diagonals), so
//! `exp(−θA) = D⁻¹ exp(iθT) D`. One spectral factorization `T = VΛVᵀ` serves
//! every requested time; each evaluation is a single fused pass over `V`
//! (O(N²) flops, O(N) memory traffic per column) — exact at `t/τ = 10⁴` with
//! no time marching. Writing `S_m = Σ_j V_{0j}V_{mj}cos(θλ_j)` and
//! `W_m = Σ_j V_{0j}V_{mj}sin(θλ_j)`, the real row is
//!
//! ```text
//! u_m = +S_m (m ≡ 0 mod 4),  −W_m (m ≡ 1),  −S_m (m ≡ 2),  +W_m (m ≡ 3).
//! ```
//!
//! Tail sums are accumulated from `m = 2N_q` downward (smallest magnitudes
//! first), which makes `C_{k+1} ≤ C_k` hold *exactly* in floating point, not
//! merely to tolerance.

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::field::{CorrelationField, FieldSource, Quantity};
use crate::linalg::{self, SymTridiagEigen};

/// The operator-walk adjacency matrix of a chain, with its spectral
/// factorization. Immutable after construction; cheap to share across
/// threads (all evaluation entry points take `&self`).
#[derive(Debug, Clone)]
pub struct WalkMatrix {
    spec: ChainSpec,
    dim: usize,
    offdiag: Vec<f64>,
    eigen: SymTridiagEigen,
}

/// Builds the walk matrix for a chain: off-diagonal pattern
/// `[1, J'₁, 1, J'₂, …, 1]` (length 2N_q−1) and the eigendecomposition of the
/// similar real symmetric tridiagonal matrix.
pub fn build_walk_matrix(spec: ChainSpec) -> Result<WalkMatrix> {
    // Re-validate: specs are constructed checked, but deserialized or
    // hand-rolled values go through here too.
    let spec = ChainSpec::new(spec.n_qubits, spec.couplings, spec.baseline)?;
    let dim = 2 * spec.n_qubits;
    let mut offdiag = Vec::with_capacity(dim - 1);
    for &j in &spec.couplings {
        offdiag.push(1.0);
        offdiag.push(j);
    }
    offdiag.push(1.0);
    debug_assert_eq!(offdiag.len(), dim - 1);
    let eigen = linalg::sym_tridiag_eigen(&vec![0.0; dim], &offdiag)?;
    Ok(WalkMatrix { spec, dim, offdiag, eigen })
}

impl WalkMatrix {
    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    /// Walk dimension, `2·n_qubits`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Super-diagonal of `A` (the sub-diagonal is its negation).
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Eigenvalues of the similar symmetric tridiagonal matrix, ascending.
    /// They come in ± pairs (chiral symmetry of the zero-diagonal matrix).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    /// Dense column-major copy of the skew-symmetric `A`, for cross-checks
    /// against generic matrix-exponential routines.
    pub fn dense_adjacency(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = vec![0.0; n * n];
        for (m, &w) in self.offdiag.iter().enumerate() {
            a[(m + 1) * n + m] = w; // A[m][m+1], column-major
            a[m * n + (m + 1)] = -w; // A[m+1][m]
        }
        a
    }
}

/// The walk-node labels in order: `Z1, Y1, X1Z2, X1Y2, …` — site `j`
/// contributes `X1⋯X_{j−1}Z_j` then `X1⋯X_{j−1}Y_j`. Subscripts are 1-based
/// site indices.
pub fn pauli_string_labels(spec: &ChainSpec) -> Vec<String> {
    let mut labels = Vec::with_capacity(2 * spec.n_qubits);
    let mut prefix = String::new();
    for site in 1..=spec.n_qubits {
        labels.push(format!("{prefix}Z{site}"));
        labels.push(format!("{prefix}Y{site}"));
        prefix.push('X');
        prefix.push_str(&site.to_string());
    }
    labels
}

/// Row 1 of `exp(−2π(t/τ)·A)`: the walk amplitudes `u`. Orthogonality of the
/// exponential guarantees `Σ u² = 1`, which holds to ~1e−10 at any time.
pub fn correlation_row(walk: &WalkMatrix, t_over_tau: f64) -> Result<Vec<f64>> {
    if !t_over_tau.is_finite() {
        return Err(Error::InvalidSpec(format!("time must be finite, got {t_over_tau}")));
    }
    let n = walk.dim;
    let theta = 2.0 * std::f64::consts::PI * t_over_tau;
    let v = &walk.eigen.eigenvectors;
    let lambda = &walk.eigen.eigenvalues;

    // Fused accumulation of S_m (cosine weights) and W_m (sine weights) in
    // one pass over the eigenvector columns.
    let mut s = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    for (j, &lam) in lambda.iter().enumerate() {
        let col = &v[j * n..(j + 1) * n];
        let v0 = col[0];
        if v0 == 0.0 {
            continue; // decoupled block not containing the starting node
        }
        let (sin_t, cos_t) = (theta * lam).sin_cos();
        let c = v0 * cos_t;
        let sn = v0 * sin_t;
        for (m, &vm) in col.iter().enumerate() {
            s[m] += vm * c;
            w[m] += vm * sn;
        }
    }

    let mut u = s; // reuse the cosine buffer
    for m in 0..n {
        u[m] = match m % 4 {
            0 => u[m],
            1 => -w[m],
            2 => -u[m],
            _ => w[m],
        };
    }
    Ok(u)
}

/// `C_k(t)` for every site `k = 1..=N_q`, via one walk-row evaluation and a
/// single backward tail-sum pass. Index `k−1` of the result is site `k`.
pub fn site_correlations(walk: &WalkMatrix, t_over_tau: f64) -> Result<Vec<f64>> {
    let u = correlation_row(walk, t_over_tau)?;
    Ok(tail_correlations(&u))
}

/// Tail sums of `u²` from the far end, snapshotted at every even 1-based
/// index: `C_k = 2·sqrt(Σ_{m ≥ 2k} u_m²)`. Accumulating smallest-first keeps
/// the deep tail accurate and makes monotonicity in `k` exact.
fn tail_correlations(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut c = vec![0.0f64; n / 2];
    let mut tail = 0.0f64;
    for m0 in (1..n).rev() {
        tail += u[m0] * u[m0];
        if m0 % 2 == 1 {
            // 0-based m0 = 2k−1 starts the tail of site k.
            c[(m0 - 1) / 2] = 2.0 * tail.sqrt();
        }
    }
    c
}

fn validate_sites(spec: &ChainSpec, sites: &[usize]) -> Result<()> {
    for &k in sites {
        if k == 0 || k > spec.n_qubits {
            return Err(Error::InvalidSpec(format!(
                "site {k} out of range 1..={}",
                spec.n_qubits
            )));
        }
    }
    Ok(())
}

/// Single-time slice of the correlation field at the requested sites.
pub fn correlation_at(walk: &WalkMatrix, t_over_tau: f64, sites: &[usize]) -> Result<CorrelationField> {
    correlation_field(walk, &[t_over_tau], sites)
}

/// The correlation field on a (site, time) grid. Each time is evaluated
/// independently (no state carried between time points), so any evaluation
/// order yields bit-identical values.
pub fn correlation_field(walk: &WalkMatrix, times: &[f64], sites: &[usize]) -> Result<CorrelationField> {
    validate_sites(&walk.spec, sites)?;
    let mut values = Vec::with_capacity(sites.len() * times.len());
    for &t in times {
        let c_all = site_correlations(walk, t)?;
        values.extend(sites.iter().map(|&k| c_all[k - 1]));
    }
    CorrelationField::new(
        sites.to_vec(),
        times.to_vec(),
        values,
        Quantity::C,
        1,
        FieldSource::SingleChain { spec: walk.spec.clone() },
    )
}
