//! Walk vs brute force: the `2N_q`-dimensional operator walk against exact
//! dense Heisenberg evolution on a disordered 8-qubit chain, plus a
//! randomized agreement sweep.
//!
//! The exact route costs `O(8^{N_q})` and tops out around 12 qubits; the
//! walk costs `O(N_q²)` per time. They must agree to 1e−8 — that agreement
//! is the whole license for trusting the walk on 1000-qubit chains.
//!
//! Run with: `cargo run --release --example short_chain_vs_oracle`

use lrchain::ensemble::{sample_configuration, DisorderModel};
use lrchain::oracle::{randomized_agreement, ExactPropagator};
use lrchain::walk::{build_walk_matrix, site_correlations};
use lrchain::ChainSpec;

fn main() -> lrchain::Result<()> {
    // One disordered chain: J' in [0.1, 0.9) around J'_0 = 0.5.
    let model = DisorderModel::new(0.5, 0.8, 1, 42)?;
    let couplings = sample_configuration(&model, 0, 7)?;
    println!("couplings: {couplings:.3?}");

    let spec = ChainSpec::new(8, couplings, 0.5)?;
    let wm = build_walk_matrix(spec.clone())?;
    let oracle = ExactPropagator::new(spec)?;
    let sites: Vec<usize> = (1..=8).collect();

    println!("\n{:>6}  {:>10}  {:>10}  {:>9}", "t/tau", "C_1 walk", "C_1 exact", "max |dev|");
    for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let walk = site_correlations(&wm, t)?;
        let exact = oracle.correlations(t, &sites)?;
        let dev = walk
            .iter()
            .zip(&exact)
            .map(|(w, o)| (w - o).abs())
            .fold(0.0f64, f64::max);
        println!("{t:>6.1}  {:>10.6}  {:>10.6}  {dev:>9.2e}", walk[0], exact[0]);
    }

    // The same comparison over randomized chains, sizes 2..=8.
    let report = randomized_agreement(8, 10, 7, 10.0, 2.0, 1e-8)?;
    println!(
        "\nrandomized sweep: {} trials, worst deviation {:.2e} (tolerance {:.0e}) -> {}",
        report.trials,
        report.max_abs_deviation,
        report.tolerance,
        if report.pass { "agree" } else { "DISAGREE" }
    );
    Ok(())
}
