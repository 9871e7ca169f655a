//! Energy and degree of the stereographic map `psi = z` and of a vortex pair.
//!
//! `cargo run --release --example bogomolny`

use num_complex::Complex64;
use std::f64::consts::PI;
use vortex_solitons::ansatz::{build_ansatz, ModelParams, Regime};
use vortex_solitons::diagnostics::{bogomolny_margin, energy_charge, SphereGrid};
use vortex_solitons::fields::GridSpec;
use vortex_solitons::profile::solve_profile;

fn main() -> vortex_solitons::Result<()> {
    for (l, h) in [(15.0f64, 0.2f64), (30.0, 0.1)] {
        let n = (2.0 * l / h).round() as usize + 1;
        let mut vals = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                vals.push(Complex64::new(-l + a as f64 * h, -l + b as f64 * h));
            }
        }
        let (e, q) = energy_charge(&SphereGrid::from_stereo(&vals, n, n, h, h)?)?;
        println!("psi = z on [-{l}, {l}]^2, h {h}: E / 8pi = {:.5}, Q = {q:.5}", e / (8.0 * PI));
    }
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    let p = ModelParams::new(Regime::PairWm, 0.1, 0.0, 1.0)?;
    let v = build_ansatz(&p, GridSpec::square(2.0 * p.d, 0.25, p.regime.symmetry())?, &prof)?;
    let (e, q) = energy_charge(&SphereGrid::from_field(&v)?)?;
    println!("vortex pair d = {}: E = {e:.4}, Q = {q:.2e}, E - 8pi|Q| = {:.4}", p.d, bogomolny_margin(e, q));
    Ok(())
}
