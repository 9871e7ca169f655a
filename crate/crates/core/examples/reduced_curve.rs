//! Numeric multiplier curve `c(d)` beside the leading-order reduced law.
//!
//! `cargo run --release --example reduced_curve`

use vortex_solitons::ansatz::{ModelParams, Regime};
use vortex_solitons::profile::solve_profile;
use vortex_solitons::reduction::{numeric_c_curve, predict_d};
use vortex_solitons::solver::SolveOptions;

fn main() -> vortex_solitons::Result<()> {
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    let p = ModelParams::new(Regime::PairWm, 0.1, 0.0, 1.0)?;
    let pd = predict_d(&p)?;
    let d_list: Vec<f64> = (0..8).map(|k| 0.5 * pd * 4f64.powf(k as f64 / 7.0)).collect();
    let curve = numeric_c_curve(&p, &d_list, 0.25, &prof, &SolveOptions::default())?;
    let (num, lead) = curve.normalized_at(0);
    println!("{:>8} {:>13} {:>13} {:>9} {:>9}", "d", "c numeric", "c leading", "scaled", "scaled");
    for k in 0..d_list.len() {
        println!(
            "{:>8.3} {:>13.5e} {:>13.5e} {:>9.4} {:>9.4}",
            curve.d_values[k], curve.c_values[k], curve.c_leading[k], num[k], lead[k]
        );
    }
    println!("sign changes at {:?}, leading root {pd:.3}", curve.crossings());
    Ok(())
}
