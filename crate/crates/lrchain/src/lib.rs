//! # lrchain
//!
//! Lieb–Robinson correlation fronts on transverse-field Ising chains via the
//! operator Pauli walk: the nested commutators of the TFIM Hamiltonian with
//! `Z₁` close on just `2N_q` Pauli strings, so the correlation function
//! `C_k(t) = ‖[Z₁(t), Z_k]‖` reduces to one row of the exponential of a
//! `2N_q × 2N_q` skew-symmetric tridiagonal matrix. That makes chains of
//! thousands of qubits and times of `10⁴ τ` directly computable — no state
//! vectors, no time stepping.
//!
//! The crate provides:
//!
//! * [`walk`] — the operator-walk adjacency matrix and the closed-form
//!   evaluation of `C_k(t)` at arbitrary times.
//! * [`oracle`] — a brute-force `2^{N_q}` Heisenberg-picture reference
//!   (N_q ≤ 12) used to validate the walk to 1e−8.
//! * [`tight_binding`] — the single-particle hopping-disorder warm-up:
//!   ballistic transport, Anderson localization, stationary `P_R` profiles.
//! * [`ensemble`] — deterministic, seeded disorder averages `C̄_k(t)` over
//!   uniform coupling disorder.
//! * [`analysis`] — dispersion/front-velocity formulas, light-cone contour
//!   extraction and velocity fits, stationarity checks, threshold
//!   localization length `k_thresh`, and the exponential-envelope fit.
//! * [`cli`] — the `lrchain` command-line front end (CSV + JSON manifests).
//!
//! ## Runnable examples
//!
//! Each major capability has a self-contained example under `examples/`:
//!
//! ```text
//! cargo run --release --example pauli_walk_labels      # the 2N_q walk strings
//! cargo run --release --example short_chain_vs_oracle  # N_q=10 field vs exact oracle
//! cargo run --release --example lightcone_velocity     # front velocity vs 2π·min(J',1)
//! cargo run --release --example decoupled_chain        # analytic J'=0 limit
//! cargo run --release --example disorder_stationarity  # late-time C̄ freeze-out
//! cargo run --release --example localization_scan      # k_thresh vs disorder width
//! cargo run --release --example hss_envelope           # exponential bound fit
//! cargo run --release --example tight_binding_fronts   # ballistic vs localized P_R
//! cargo run --release --example long_chain_timing      # N_q=1000 performance check
//! ```
//!
//! All times are dimensionless (`t/τ`, τ = πħ/γ); all sites are 1-based,
//! matching the physics convention.

pub mod analysis;
pub mod chain;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod tight_binding;
pub mod walk;

pub use chain::{ChainSpec, TbChainSpec};
pub use ensemble::DisorderModel;
pub use error::{Error, Result};
pub use field::{CorrelationField, FieldSource, Quantity};
pub use walk::WalkMatrix;
