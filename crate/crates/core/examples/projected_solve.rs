//! Newton solve of the projected equation at the leading-order separation.
//!
//! `cargo run --release --example projected_solve -- [eps] [kappa]`

use vortex_solitons::ansatz::{build_ansatz, kernel_zd, ModelParams, Regime};
use vortex_solitons::fields::{GridSpec, Symmetry};
use vortex_solitons::profile::solve_profile;
use vortex_solitons::reduction::predict_d;
use vortex_solitons::solver::{solve_projected, SolveOptions};

fn main() -> vortex_solitons::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let eps = args.first().copied().unwrap_or(0.1);
    let kappa = args.get(1).copied().unwrap_or(0.0);
    let regime = if kappa == 0.0 { Regime::PairWm } else { Regime::PairSch };
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    let p0 = ModelParams::new(regime, eps, kappa, 1.0)?;
    let p = p0.with_d(predict_d(&p0)?)?;
    let spec = GridSpec::square(2.0 * p.d, 0.25, Symmetry::Pair)?;
    let v = build_ansatz(&p, spec, &prof)?;
    let z = kernel_zd(&p, spec, &prof, &v)?;
    let r = solve_projected(&p, &v, &z, regime.tag(), &SolveOptions::default())?;
    println!("{} eps {eps} kappa {kappa} d {:.2} on {}x{} points", regime.name(), p.d, spec.n1, spec.n2);
    for (k, res) in r.residual_history.iter().enumerate() {
        println!("  newton {k:>2}  residual {res:.3e}");
    }
    println!("multiplier c = {:.6e}, corrector norm {:.4e}, {} Krylov steps", r.c_mult, r.corrector_norm_star, r.krylov_iters);
    Ok(())
}
