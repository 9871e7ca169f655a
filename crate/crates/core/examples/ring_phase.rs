//! Vortex-ring ansatz: the curvature phase correction and the error it removes.
//!
//! `cargo run --release --example ring_phase`

use vortex_solitons::ansatz::{build_ansatz, build_pair, error_field, ModelParams, Regime};
use vortex_solitons::fields::{ComplexField, GridSpec, Symmetry};
use vortex_solitons::profile::solve_profile;

fn main() -> vortex_solitons::Result<()> {
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    for eps in [0.1, 0.05, 0.025] {
        let p = ModelParams::new(Regime::RingSch, eps, 0.25, 1.0)?;
        let spec = GridSpec::square(2.0 * p.d, 0.25, Symmetry::Ring)?;
        let ring = build_ansatz(&p, spec, &prof)?;
        // the same product of vortices without the phase correction
        let bare: ComplexField = build_pair(&p, spec, &prof)?;
        let (_, with) = error_field(&ring, p.regime.tag(), &p)?;
        let (_, without) = error_field(&bare, p.regime.tag(), &p)?;
        println!(
            "eps {eps:<6} d {:>5.1}  error with phase {:.4e} (inner {:.4e})  without {:.4e}",
            p.d, with.total, with.inner, without.total
        );
    }
    Ok(())
}
