//! The operator walk in its own words: which Pauli strings a `Z₁` seed can
//! reach under the transverse-field Ising dynamics, and how the walk weight
//! spreads over them.
//!
//! Nested commutators of the Hamiltonian with `Z₁` never leave a ladder of
//! `2N_q` strings (`Z₁, Y₁, X₁Z₂, X₁Y₂, …`); Heisenberg evolution is a
//! rotation in that tiny space. This example prints the ladder with the
//! hop weights between rungs, then shows the squared-weight distribution
//! at a few times: a wave packet running down the ladder.
//!
//! Run with: `cargo run --release --example pauli_walk_labels`

use lrchain::walk::{build_walk_matrix, correlation_row, pauli_string_labels};
use lrchain::ChainSpec;

fn main() -> lrchain::Result<()> {
    let spec = ChainSpec::uniform(5, 0.8)?;
    let labels = pauli_string_labels(&spec);
    let wm = build_walk_matrix(spec)?;

    println!("walk ladder for 5 qubits at J' = 0.8 (hop weight to the next rung):");
    for (m, label) in labels.iter().enumerate() {
        match wm.offdiag().get(m) {
            Some(w) => println!("  {m:>2}  {label:<10} --{w:.1}--"),
            None => println!("  {m:>2}  {label:<10} (end of ladder)"),
        }
    }

    println!("\nsquared walk weight per string (rows sum to 1):");
    print!("{:>8}", "t/tau");
    for label in &labels {
        print!("  {label:>6}");
    }
    println!();
    for t in [0.0, 0.25, 0.5, 1.0] {
        let u = correlation_row(&wm, t)?;
        print!("{t:>8.2}");
        for &v in &u {
            print!("  {:>6.3}", v * v);
        }
        println!();
    }
    Ok(())
}
