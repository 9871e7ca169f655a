//! Rebuilds the space-time soliton from a balanced pair and checks the equation on the
//! sphere at three finite-difference spacings.
//!
//! `cargo run --release --example reconstruct`

use vortex_solitons::ansatz::{build_ansatz, ModelParams, Regime};
use vortex_solitons::fields::GridSpec;
use vortex_solitons::profile::solve_profile;
use vortex_solitons::reconstruct::{pde_residual, refinement_order, spacetime_field, unscale, SampleBlock};
use vortex_solitons::reduction::predict_d;
use vortex_solitons::solver::{solve_balanced, SolveOptions};

fn main() -> vortex_solitons::Result<()> {
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    let p0 = ModelParams::new(Regime::PairSch, 0.2, 0.25, 1.0)?;
    let pd = predict_d(&p0)?;
    let h = 0.125;
    let b = solve_balanced(&p0, (0.75 * pd, 1.3 * pd), h, &prof, &SolveOptions::default())?;
    let p = p0.with_d(b.d_star)?;
    println!("balanced d* = {:.4}, c = {:.5}, omega = {:.5}", p.d, p.c, p.omega);
    let ev = unscale(&b.result.u, &p)?;
    for t in [0.0, 1.0, 2.0] {
        let m = spacetime_field(&ev, &p, t, 0.0, &[p.d, 1.0])?;
        println!("  m(t = {t}, tau = 0, s = (d, 1)) = {:?}", m.m.as_array());
    }
    let raw = build_ansatz(&p, GridSpec::square(2.0 * 1.3 * pd, h / 2.0, p.regime.symmetry())?, &prof)?;
    let ev_raw = unscale(&raw, &p)?;
    for f in [1.0, 0.5, 0.25] {
        let block = SampleBlock::window([p.d, 3.0], 2.0, 13, vec![0.0, 1.0], vec![0.0, 0.37], h / 16.0 * f);
        let r = pde_residual(&ev, &p, &block)?;
        let a = pde_residual(&ev_raw, &p, &block)?;
        println!("  spacing {:.2e}: solution {:.3e}, raw ansatz {:.3e}", block.delta, r.l2, a.l2);
    }
    let block = SampleBlock::window([p.d, 3.0], 2.0, 13, vec![0.0, 1.0], vec![0.0, 0.37], h / 16.0);
    println!("  observed order {:.2}", refinement_order(&ev, &p, &block)?);
    Ok(())
}
