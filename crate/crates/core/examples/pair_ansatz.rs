//! Builds the vortex-pair ansatz, locates its cores and measures its error.
//!
//! `cargo run --release --example pair_ansatz`

use vortex_solitons::ansatz::{build_ansatz, error_field, ModelParams, Regime};
use vortex_solitons::diagnostics::{detect_vortices_lattice, full_plane_winding};
use vortex_solitons::fields::GridSpec;
use vortex_solitons::profile::solve_profile;

fn main() -> vortex_solitons::Result<()> {
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    for (regime, kappa) in [(Regime::PairWm, 0.0), (Regime::PairSch, 0.25)] {
        println!("{}", regime.name());
        for eps in [0.1, 0.05, 0.025] {
            let p = ModelParams::new(regime, eps, kappa, 1.0)?;
            let spec = GridSpec::square(2.0 * p.d, 0.25, regime.symmetry())?;
            let v = build_ansatz(&p, spec, &prof)?;
            let (_, n) = error_field(&v, regime.tag(), &p)?;
            let (full, m1, m2) = v.expand_full();
            let cores = detect_vortices_lattice(&full, m1, m2, [-spec.l1, -spec.l2], [spec.h1, spec.h2]);
            let list: Vec<String> = cores.iter().map(|c| format!("{:+} at ({:.2}, {:.2})", c.charge, c.position[0], c.position[1])).collect();
            println!(
                "  eps {eps:<6} d {:>5.1}  c {:.5}  error {:.4e}  winding {}  cores [{}]",
                p.d,
                p.c,
                n.total,
                full_plane_winding(&v)?,
                list.join(", ")
            );
        }
    }
    Ok(())
}
