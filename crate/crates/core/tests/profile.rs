//! Degree-one core profile: shooting solve, interpolation, tail law and integrals.

mod common;

use vortex_solitons::profile::{eval_profile, profile_integrals, profile_integrals_upto, solve_profile, ELL0};

/// Right-hand side of the profile equation written out independently:
/// `rho'' = -rho'/l + 2 rho rho'^2/(1 + rho^2) - (1 - 1/l^2) (1 - rho^2)/(1 + rho^2) rho`.
fn rho_second(l: f64, r: f64, dr: f64) -> f64 {
    -dr / l + 2.0 * r * dr * dr / (1.0 + r * r) - (1.0 - 1.0 / (l * l)) * (1.0 - r * r) / (1.0 + r * r) * r
}

#[test]
fn fine_profile_reaches_one_and_increases() {
    let p = solve_profile(30.0, 1e-3, 1e-10).unwrap();
    assert!((p.rho[0] - p.slope_a * ELL0).abs() <= 1e-10);
    assert!((1.0 - p.eval(30.0).0).abs() <= 1e-5);
    assert!(p.rho.iter().all(|&r| r > 0.0 && r < 1.0));
    let q = common::profile();
    // the default solve reaches radii where rho rounds to 1; 1 - rho is kept exactly
    assert!(q.eta.iter().all(|&e| e > 0.0));
    assert!(q.rho.iter().zip(&q.eta).all(|(r, e)| (1.0 - e - r).abs() <= 1e-15));
    let l = q.ell_max();
    assert!((q.eta.last().unwrap() / (q.tail_c0 * (-l).exp() / l.sqrt()) - 1.0).abs() < 0.05);
    assert!(p.drho.iter().all(|&d| d > 0.0));
    // strictly increasing until 1 - rho reaches rounding level
    assert!(p.rho.windows(2).all(|w| w[1] > w[0] || 1.0 - w[0] < 1e-12));
}

#[test]
fn tail_follows_the_exponential_law() {
    let (slope, _) = common::profile().tail_regression(8.0, 14.0);
    assert!((slope + 1.0).abs() <= 0.05, "tail slope {slope}");
}

#[test]
fn stored_samples_satisfy_the_ode() {
    let p = common::profile();
    let h = p.step();
    let d = &p.drho;
    let mut worst = 0.0f64;
    for i in 3..p.knots.len() - 3 {
        let ddr = (-d[i - 3] + 9.0 * d[i - 2] - 45.0 * d[i - 1] + 45.0 * d[i + 1] - 9.0 * d[i + 2] + d[i + 3]) / (60.0 * h);
        worst = worst.max((ddr - rho_second(p.knots[i], p.rho[i], p.drho[i])).abs());
    }
    assert!(worst <= 1e-9, "max residual {worst}");
    let own = p.ode_residuals().iter().fold(0.0f64, |a, r| a.max(r.1.abs()));
    assert!((own - worst).abs() <= 1e-12);
}

#[test]
fn evaluation_at_knots_origin_and_tail() {
    let p = common::profile();
    for k in [0, 17, 1000, p.knots.len() - 1] {
        assert_eq!(p.eval(p.knots[k]), (p.rho[k], p.drho[k]));
    }
    assert_eq!(eval_profile(p, 0.0).unwrap(), (0.0, p.slope_a));
    let l = p.ell_max() + 5.0;
    let (r, dr) = p.eval(l);
    let g = p.tail_c0 * (-l).exp() / l.sqrt();
    assert!((r - (1.0 - g)).abs() <= 1e-6);
    assert!((dr - g * (1.0 + 0.5 / l)).abs() <= 1e-6);
    assert!(eval_profile(p, -1.0).is_err());
}

#[test]
fn interpolant_is_continuous_across_cells() {
    let p = common::profile();
    for l in [0.5, 3.0, 7.77] {
        let (a, _) = p.eval(l - 1e-9);
        let (b, _) = p.eval(l + 1e-9);
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn integrals_match_closed_forms() {
    // t = rho^2 turns both into rational integrals on [0, 1]: 1/4 and 1/8
    let (i1, i2) = profile_integrals(common::profile());
    assert!((i1 - 0.25).abs() <= 1e-6, "I1 = {i1}");
    assert!((i2 - 0.125).abs() <= 1e-6, "I2 = {i2}");
}

#[test]
fn truncated_integrals_differ_little() {
    let p = common::profile();
    let (a1, a2) = profile_integrals(p);
    let (b1, b2) = profile_integrals_upto(p, 10.0);
    assert!((a1 - b1).abs() < 1e-4 && (a2 - b2).abs() < 1e-4);
    assert!(b1 < a1);
}

#[test]
fn step_halving_converges() {
    let a = solve_profile(30.0, 1e-2, 1e-10).unwrap();
    let b = solve_profile(30.0, 5e-3, 1e-10).unwrap();
    assert!((a.eval(5.0).0 - b.eval(5.0).0).abs() <= 1e-4 * 10.0);
    assert!((a.slope_a - b.slope_a).abs() <= 1e-6);
}

#[test]
fn out_of_range_arguments_are_rejected() {
    assert!(solve_profile(10.0, 1e-3, 1e-10).is_err());
    assert!(solve_profile(30.0, 0.05, 1e-10).is_err());
    assert!(solve_profile(30.0, 1e-3, 1e-6).is_err());
}
