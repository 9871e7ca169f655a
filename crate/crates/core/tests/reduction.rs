//! Leading-order reduced equation, its root and the numeric multiplier curve.

mod common;

use proptest::prelude::*;
use std::f64::consts::{E, PI};
use vortex_solitons::ansatz::{ModelParams, Regime};
use vortex_solitons::profile::profile_integrals;
use vortex_solitons::reduction::{leading_c, numeric_c_curve, predict_d, ReducedCurve};
use vortex_solitons::solver::SolveOptions;
use vortex_solitons::Error;

fn params(regime: Regime, eps: f64, kappa: f64) -> ModelParams {
    ModelParams::new(regime, eps, kappa, 1.0).unwrap()
}

/// Root of `log d / d = rhs` on `d > e`, by plain bisection.
fn ring_root(rhs: f64) -> f64 {
    let (mut lo, mut hi) = (E, 1e6);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.ln() / mid > rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn pair_leading_root_and_bracket() {
    let p = params(Regime::PairWm, 0.05, 0.0);
    assert!(leading_c(20.0, &p).abs() <= 1e-16);
    assert_ne!(leading_c(10.0, &p).signum(), leading_c(40.0, &p).signum());
    assert_eq!(predict_d(&p).unwrap(), 20.0);
    assert!((predict_d(&params(Regime::PairSch, 0.05, 0.25)).unwrap() - 40.0).abs() < 1e-12);
}

#[test]
fn ring_leading_root_matches_bisection() {
    let p = params(Regime::RingWm, 0.05, 0.0);
    let rhs = 2.0 * 0.05 * 0.05f64.ln().abs();
    assert!((rhs - 0.29957).abs() < 1e-5);
    let d = predict_d(&p).unwrap();
    assert!((d - ring_root(rhs)).abs() < 1e-9);
    assert!((d - 5.99).abs() < 0.05, "{d}");
    assert!(leading_c(d, &p).abs() < 1e-14);
    let q = params(Regime::RingSch, 0.2, 0.0);
    assert!(matches!(predict_d(&q), Err(Error::NoRoot(_))));
}

#[test]
fn pair_coefficients_come_from_the_profile_integrals() {
    let (i1, i2) = profile_integrals(common::profile());
    let (eps, d) = (0.05, 17.0);
    let p0 = params(Regime::PairWm, eps, 0.0);
    let eps_coef = (leading_c(d, &p0) + PI / (4.0 * d)) / eps;
    assert!((eps_coef - 2.0 * PI * i2).abs() <= 1e-5 * eps_coef);
    let p1 = params(Regime::PairSch, eps, 0.25);
    let t_coef = (leading_c(d, &p0) - leading_c(d, &p1)) / (0.25 * eps);
    assert!((t_coef - 2.0 * PI * i1).abs() <= 1e-5 * t_coef);
}

proptest! {
    #[test]
    fn leading_c_changes_sign_once(eps in 0.005f64..0.2, kappa in 0.0f64..0.45, ring in any::<bool>()) {
        let regime = if ring { Regime::RingSch } else { Regime::PairSch };
        let p = params(regime, eps, kappa);
        let pd = predict_d(&p);
        prop_assume!(pd.is_ok());
        let pd = pd.unwrap();
        let lo = (pd / 4.0).max(2.0);
        // below d = 2 / rhs above log 2 / 2 the ring law also has a root on its rising branch
        prop_assume!(!ring || 2.0 * (1.0 - 2.0 * kappa) * eps * eps.ln().abs() < 2f64.ln() / 2.0);
        let n = 400;
        let vals: Vec<f64> = (0..=n).map(|k| leading_c(lo * (4.0 * pd / lo).powf(k as f64 / n as f64), &p)).collect();
        let changes = vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        prop_assert_eq!(changes, 1);
    }
}

#[test]
fn curve_crossings_interpolate_linearly() {
    let c = ReducedCurve {
        regime: Regime::PairWm,
        d_values: vec![1.0, 2.0, 3.0],
        c_values: vec![-1.0, 1.0, 3.0],
        c_leading: vec![-2.0, 2.0, 6.0],
        complete: true,
    };
    assert_eq!(c.crossings(), vec![1.5]);
    let (a, b) = c.normalized_at(0);
    assert_eq!(a, vec![1.0, -1.0, -3.0]);
    assert_eq!(a, b);
}

#[test]
fn numeric_curve_crosses_once_near_the_prediction() {
    let p = params(Regime::PairWm, 0.05, 0.0);
    let pd = predict_d(&p).unwrap();
    let d_list: Vec<f64> = (0..8).map(|k| 0.5 * pd * 4f64.powf(k as f64 / 7.0)).collect();
    let curve = numeric_c_curve(&p, &d_list, 0.25, common::profile(), &SolveOptions::default()).unwrap();
    assert!(curve.complete);
    let x = curve.crossings();
    assert_eq!(x.len(), 1, "{:?}", curve.c_values);
    assert!((x[0] - pd).abs() <= 0.25 * pd, "crossing {}", x[0]);
    // sign convention: both curves agree in sign at predict_d / 2
    assert_eq!(curve.c_values[0].signum(), curve.c_leading[0].signum());
    let (num, lead) = curve.normalized_at(0);
    for k in 0..num.len() {
        assert!((num[k] - lead[k]).abs() <= 0.3, "sample {k}: {} vs {}", num[k], lead[k]);
    }
    // continuity: adjacent samples differ by at most C |dd| with C from the first step
    let slope = |k: usize| ((curve.c_values[k + 1] - curve.c_values[k]) / (d_list[k + 1] - d_list[k])).abs();
    let c0 = slope(0);
    assert!((0..7).all(|k| slope(k) <= 2.0 * c0));
    assert!(numeric_c_curve(&p, &[30.0, 20.0], 0.25, common::profile(), &SolveOptions::default()).is_err());
}
