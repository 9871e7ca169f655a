//! Balanced separation of the pair: the root of the multiplier against the prediction.
//!
//! `cargo run --release --example force_balance`

use vortex_solitons::ansatz::{ModelParams, Regime};
use vortex_solitons::profile::solve_profile;
use vortex_solitons::reduction::predict_d;
use vortex_solitons::solver::{solve_balanced, SolveOptions};

fn main() -> vortex_solitons::Result<()> {
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    for eps in [0.2, 0.1] {
        let p = ModelParams::new(Regime::PairWm, eps, 0.0, 1.0)?;
        let pd = predict_d(&p)?;
        let b = solve_balanced(&p, (0.75 * pd, 1.3 * pd), 0.25, &prof, &SolveOptions::default())?;
        println!("eps {eps}: leading d = {pd:.3}, numeric d* = {:.4}, 1/(eps d*) = {:.4}", b.d_star, 1.0 / (eps * b.d_star));
        for (d, c) in &b.samples {
            println!("    c({d:.4}) = {c:+.4e}");
        }
    }
    Ok(())
}
