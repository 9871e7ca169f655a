//! Solves the degree-one core profile and prints its headline numbers.
//!
//! `cargo run --release --example profile`

use vortex_solitons::profile::{profile_integrals, solve_profile};

fn main() -> vortex_solitons::Result<()> {
    let p = solve_profile(40.0, 0.01, 1e-10)?;
    let (i1, i2) = profile_integrals(&p);
    let worst = p.ode_residuals().iter().fold(0.0f64, |a, r| a.max(r.1.abs()));
    let (slope, _) = p.tail_regression(8.0, 14.0);
    println!("slope at the origin  a = {:.9}", p.slope_a);
    println!("tail constant        c0 = {:.6}", p.tail_c0);
    println!("tail log-slope       {slope:.5} (expected -1)");
    println!("ODE residual         {worst:.2e}");
    println!("I1 = {i1:.9} (1/4), I2 = {i2:.9} (1/8)");
    for l in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let (r, dr) = p.eval(l);
        println!("  rho({l:>3}) = {r:.8}  rho' = {dr:.8}");
    }
    Ok(())
}
