//! Why the walk matters: `C_k(t)` for a 1000-qubit chain means exponentials
//! of a 2000×2000 skew-symmetric matrix instead of a 2^1000-dimensional
//! state space. One eigendecomposition serves every time sample, so a
//! 100-point trace costs seconds — and the cost grows far slower than the
//! cube of the chain length.
//!
//! Run with: `cargo run --release --example long_chain_timing`

use lrchain::ensemble::{sample_configuration, DisorderModel};
use lrchain::walk::{build_walk_matrix, correlation_row, site_correlations};
use lrchain::ChainSpec;
use std::time::Instant;

fn main() -> lrchain::Result<()> {
    let times: Vec<f64> = (1..=100).map(|i| i as f64).collect();
    let mut seconds = Vec::new();

    println!("{:>7}  {:>10}  {:>10}  {:>12}", "N_q", "build (s)", "100 t (s)", "sum u^2 - 1");
    for n_qubits in [250usize, 500, 1000] {
        let model = DisorderModel::new(0.5, 0.8, 1, 33)?;
        let couplings = sample_configuration(&model, 0, n_qubits - 1)?;
        let spec = ChainSpec::new(n_qubits, couplings, 0.5)?;

        let t_build = Instant::now();
        let wm = build_walk_matrix(spec)?;
        let build_s = t_build.elapsed().as_secs_f64();

        let t_eval = Instant::now();
        let mut last = Vec::new();
        for &t in &times {
            last = site_correlations(&wm, t)?;
        }
        let eval_s = t_eval.elapsed().as_secs_f64();
        std::hint::black_box(&last);

        let u = correlation_row(&wm, 1e4)?;
        let norm_defect: f64 = u.iter().map(|v| v * v).sum::<f64>() - 1.0;
        println!("{n_qubits:>7}  {build_s:>10.3}  {eval_s:>10.3}  {norm_defect:>12.2e}");
        seconds.push(build_s + eval_s);
    }

    let ratio = seconds[2] / seconds[0].max(1e-9);
    let exponent = ratio.ln() / 4.0f64.ln();
    println!(
        "\n250 -> 1000 qubits: {ratio:.1}x wall time, effective exponent {exponent:.2} \
         (cubic would be 3.00)"
    );
    Ok(())
}
