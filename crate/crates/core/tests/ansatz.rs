//! Vortex-pair and ring ansatz, co-kernel field and error fields.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use vortex_solitons::ansatz::{
    build_ansatz, build_pair, build_ring, build_ring_phase, error_field, kernel_zd, singular_model, singular_phase,
    ring_phase_source, vortex_geometry, vortex_value, ModelParams, Regime, KERNEL_R,
};
use vortex_solitons::fields::{ComplexField, Field, GridSpec};
use vortex_solitons::solver::OpTag;

fn pair(eps: f64, kappa: f64, d_hat: f64) -> ModelParams {
    ModelParams::new(Regime::PairWm, eps, kappa, d_hat).unwrap()
}

/// Degree of the sampled loop `z(t)` around a circle, summed from principal phase steps.
fn loop_winding(f: &ComplexField, center: [f64; 2], radius: f64) -> i32 {
    let n = 400;
    let mut total = 0.0;
    let at = |k: usize| {
        let t = 2.0 * PI * k as f64 / n as f64;
        f.reflect_full(center[0] + radius * t.cos(), center[1] + radius * t.sin()).unwrap()
    };
    for k in 0..n {
        total += (at(k + 1) * at(k).conj()).arg();
    }
    (total / (2.0 * PI)).round() as i32
}

#[test]
fn model_parameters_obey_the_speed_relations() {
    let p = ModelParams::new(Regime::PairSch, 0.05, 0.25, 1.0).unwrap();
    let g = (1.0 - p.c * p.c).sqrt();
    assert!((2.0 * p.c / g - 0.05).abs() < 1e-15);
    assert!((p.omega / g - 0.25 * 0.05).abs() < 1e-15);
    assert_eq!(p.d, 20.0);
    let r = ModelParams::new(Regime::RingSch, 0.05, 0.25, 1.0).unwrap();
    let g = (1.0 - r.c * r.c).sqrt();
    let a = 0.05 * 0.05f64.ln().abs();
    assert!((2.0 * r.c / g - a).abs() < 1e-15);
    assert!((r.omega / g - 0.25 * a).abs() < 1e-15);
    assert!(ModelParams::new(Regime::PairWm, 0.3, 0.0, 1.0).is_err());
    assert!(ModelParams::new(Regime::PairWm, 0.05, 0.5, 1.0).is_err());
    assert!(ModelParams::new(Regime::PairWm, 0.05, 0.0, 200.0).is_err());
    assert!(ModelParams::new(Regime::PairWm, 0.05, 0.0, 0.001).is_err());
    for name in ["PAIR_WM", "PAIR_SCH", "RING_WM", "RING_SCH"] {
        assert_eq!(Regime::parse(name).unwrap().name(), name);
    }
    assert!(Regime::parse("HELIX").is_err());
}

#[test]
fn geometry_examples() {
    let g = vortex_geometry([0.0, 0.0], [1.0, 0.0]).unwrap();
    assert_eq!((g.ell, g.theta, g.grad_theta), (1.0, 0.0, [0.0, 1.0]));
    assert!(vortex_geometry([1.0, 2.0], [1.0, 2.0]).is_err());
    // the cut lies on the negative ray
    let up = vortex_geometry([0.0, 0.0], [-1.0, 1e-12]).unwrap().theta;
    let down = vortex_geometry([0.0, 0.0], [-1.0, -1e-12]).unwrap().theta;
    assert!((up - down - 2.0 * PI).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn angle_gradient_has_inverse_length(x in -50.0f64..50.0, y in -50.0f64..50.0, cx in -5.0f64..5.0) {
        prop_assume!((x - cx).hypot(y) > 1e-6);
        let g = vortex_geometry([cx, 0.0], [x, y]).unwrap();
        prop_assert!((g.grad_theta[0].hypot(g.grad_theta[1]) * g.ell - 1.0).abs() < 1e-12);
        prop_assert!((g.grad_ell[0].hypot(g.grad_ell[1]) - 1.0).abs() < 1e-12);
        let m = vortex_geometry([cx, 0.0], [x, -y]).unwrap();
        if y != 0.0 {
            prop_assert!((m.theta + g.theta).abs() < 1e-12);
        }
    }
}

#[test]
fn pair_has_its_cores_at_plus_minus_d() {
    let p = pair(0.2, 0.0, 1.0);
    let spec = GridSpec::square(12.0, 0.25, Regime::PairWm.symmetry()).unwrap();
    let v = build_pair(&p, spec, common::profile()).unwrap();
    assert_eq!(v.at(20, 0), Complex64::new(0.0, 0.0));
    assert_eq!(loop_winding(&v, [5.0, 0.0], 1.0), 1);
    assert_eq!(loop_winding(&v, [-5.0, 0.0], 1.0), -1);
    assert_eq!(loop_winding(&v, [0.0, 4.0], 1.0), 0);
    assert_eq!(loop_winding(&v, [0.0, 0.0], 8.0), 0);
    assert!(build_pair(&p, GridSpec::square(4.0, 0.25, p.regime.symmetry()).unwrap(), common::profile()).is_err());
}

#[test]
fn pair_modulus_tends_to_one_far_away() {
    let p = pair(0.2, 0.0, 0.4);
    let spec = GridSpec::square(22.0, 0.25, p.regime.symmetry()).unwrap();
    let v = build_pair(&p, spec, common::profile()).unwrap();
    for k in 0..16 {
        let t = 0.5 * PI * k as f64 / 15.0;
        let m = v.reflect_full(20.0 * t.cos(), 20.0 * t.sin()).unwrap().norm();
        assert!((m - 1.0).abs() <= 0.25);
    }
}

#[test]
fn pair_samples_obey_the_parity_table() {
    // evaluate the product formula at mirrored points and compare with the stored quarter
    let p = pair(0.1, 0.0, 0.5);
    let spec = GridSpec::square(12.0, 0.25, p.regime.symmetry()).unwrap();
    let v = build_pair(&p, spec, common::profile()).unwrap();
    let prod = |x1: f64, x2: f64| {
        vortex_value(common::profile(), x1 - p.d, x2, true) * vortex_value(common::profile(), x1 + p.d, x2, false)
    };
    for i in (0..spec.n1).step_by(7) {
        for j in (0..spec.n2).step_by(5) {
            let (x1, x2) = (spec.x1(i), spec.x2(j));
            assert!((prod(x1, -x2) - v.at(i, j).conj()).norm() < 1e-14);
            assert!((prod(-x1, x2) - v.at(i, j)).norm() < 1e-14);
        }
        assert_eq!(v.at(i, 0).im, 0.0);
    }
}

#[test]
fn singular_model_has_the_stated_laplacian() {
    let d = 20.0;
    let k = 1e-3;
    for &(y1, y2) in &[(0.7, 0.4), (-1.3, 2.2), (0.2, -0.9)] {
        let f = |a: f64, b: f64| singular_model(d, a, b);
        let c = f(y1, y2);
        let d11 = (-f(y1 + 2.0 * k, y2) + 16.0 * f(y1 + k, y2) - 30.0 * c + 16.0 * f(y1 - k, y2) - f(y1 - 2.0 * k, y2))
            / (12.0 * k * k);
        let d22 = (-f(y1, y2 + 2.0 * k) + 16.0 * f(y1, y2 + k) - 30.0 * c + 16.0 * f(y1, y2 - k) - f(y1, y2 - 2.0 * k))
            / (12.0 * k * k);
        let expect = y2 / (d * (y1 * y1 + y2 * y2));
        assert!((d11 + d22 - expect).abs() < 1e-8, "{} vs {expect}", d11 + d22);
    }
}

#[test]
fn singular_phase_vanishes_on_the_axis() {
    let p = ModelParams::new(Regime::RingWm, 0.1, 0.0, 1.0).unwrap();
    let spec = GridSpec::square(20.0, 0.25, p.regime.symmetry()).unwrap();
    let (phi_s, phi_r) = build_ring_phase(&p, spec).unwrap();
    for i in 0..spec.n1 {
        assert_eq!(phi_s.at(i, 0), 0.0);
        assert_eq!(phi_r.at(i, 0), 0.0);
    }
    for j in 0..spec.n2 {
        assert_eq!(phi_r.at(spec.n1 - 1, j), 0.0);
    }
    assert!(build_ring_phase(&pair(0.1, 0.0, 1.0), spec).is_err());
}

#[test]
fn ring_phase_cancels_the_curvature_term_near_the_core() {
    // [Delta + (1/x1) d/dx1](theta_e1 - theta_e2 + phi_s) by finite differences, on the
    // annulus 1 < |z - e1| < d/10 where the cutoff equals one
    let eps = 0.05;
    let d = 1.0 / eps;
    let phase = |x1: f64, x2: f64| (x2.atan2(x1 - d) - x2.atan2(x1 + d)) + singular_phase(d, x1, x2);
    let k = 1e-3;
    let mut worst = 0.0f64;
    for a in 0..24 {
        for r in [1.1, 1.5, 1.9] {
            let t = 2.0 * PI * (a as f64 + 0.5) / 24.0;
            let (x1, x2) = (d + r * t.cos(), r * t.sin());
            if x1 < d && x2.abs() < 4.0 * k {
                continue;
            }
            let f = |a: f64, b: f64| phase(a, b);
            let c = f(x1, x2);
            let lap = (f(x1 + k, x2) + f(x1 - k, x2) + f(x1, x2 + k) + f(x1, x2 - k) - 4.0 * c) / (k * k);
            let h1 = (f(x1 + k, x2) - f(x1 - k, x2)) / (2.0 * k * x1);
            let v = lap + h1;
            assert!((v - ring_phase_source(d, x1, x2)).abs() < 1e-4, "{v}");
            worst = worst.max(v.abs());
        }
    }
    assert!(worst <= 10.0 * eps * eps, "sup {worst}");
}

#[test]
fn ring_ansatz_is_the_pair_times_a_unimodular_phase() {
    let p = ModelParams::new(Regime::RingWm, 0.1, 0.0, 1.0).unwrap();
    let spec = GridSpec::square(20.0, 0.25, p.regime.symmetry()).unwrap();
    let zero = (Field::zeros(spec), Field::zeros(spec));
    let plain = build_ring(&p, spec, common::profile(), &zero).unwrap();
    let pp = pair(0.1, 0.0, 1.0);
    let pspec = GridSpec::square(20.0, 0.25, pp.regime.symmetry()).unwrap();
    assert_eq!(plain.data, build_pair(&pp, pspec, common::profile()).unwrap().data);
    let v = build_ansatz(&p, spec, common::profile()).unwrap();
    for k in 0..spec.len() {
        assert!((v.data[k].norm() - plain.data[k].norm()).abs() < 1e-14);
    }
    assert_eq!(loop_winding(&v, [10.0, 0.0], 1.0), 1);
    assert_eq!(loop_winding(&v, [-10.0, 0.0], 1.0), -1);
    assert!(build_ansatz(&p, pspec, common::profile()).is_err());
}

#[test]
fn kernel_is_supported_near_the_cores() {
    let p = pair(0.05, 0.0, 1.0);
    let spec = GridSpec::square(40.0, 0.25, p.regime.symmetry()).unwrap();
    let v = build_pair(&p, spec, common::profile()).unwrap();
    let z = kernel_zd(&p, spec, common::profile(), &v).unwrap();
    for i in 0..spec.n1 {
        for j in 0..spec.n2 {
            let l = (spec.x1(i) - p.d).hypot(spec.x2(j));
            if l > 2.0 * KERNEL_R {
                assert_eq!(z.at(i, j), Complex64::new(0.0, 0.0));
            }
        }
        assert_eq!(z.at(i, 0).im, 0.0);
    }
    // near e1, Z = -(dw/dy1) e^{-i theta_e2} up to O(eps)
    let w = |y1: f64, y2: f64| vortex_value(common::profile(), y1, y2, true);
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for i in 0..spec.n1 {
        for j in 0..spec.n2 {
            let (x1, x2) = (spec.x1(i), spec.x2(j));
            let (y1, y2) = (x1 - p.d, x2);
            if y1.hypot(y2) >= 2.0 {
                continue;
            }
            let k = 1e-5;
            let dw = (w(y1 + k, y2) - w(y1 - k, y2)) / (2.0 * k);
            let model = -dw * Complex64::from_polar(1.0, -x2.atan2(x1 + p.d));
            num = num.max((z.at(i, j) - model).norm());
            den = den.max(model.norm());
        }
    }
    assert!(num / den <= 0.1, "relative {}", num / den);
}

#[test]
fn kernel_is_continuous_in_d() {
    let spec = GridSpec::square(40.0, 0.25, Regime::PairWm.symmetry()).unwrap();
    let z_at = |d: f64| {
        let p = pair(0.05, 0.0, d * 0.05);
        let v = build_pair(&p, spec, common::profile()).unwrap();
        kernel_zd(&p, spec, common::profile(), &v).unwrap()
    };
    let l2 = |a: &ComplexField, b: &ComplexField| {
        let mut acc = 0.0;
        for i in 0..spec.n1 {
            for j in 0..spec.n2 {
                acc += spec.trap_weight(i, j) * (a.at(i, j) - b.at(i, j)).norm_sqr();
            }
        }
        acc.sqrt()
    };
    let z0 = z_at(18.0);
    let r1 = l2(&z0, &z_at(18.01)) / 0.01;
    let r2 = l2(&z0, &z_at(18.04)) / 0.04;
    assert!(r1 < 10.0 && r2 < 10.0 && (r1 / r2 - 1.0).abs() < 0.2, "{r1} {r2}");
}

#[test]
fn ring_kernel_obeys_the_parity_table() {
    let p = ModelParams::new(Regime::RingSch, 0.1, 0.25, 1.0).unwrap();
    let spec = GridSpec::square(20.0, 0.25, p.regime.symmetry()).unwrap();
    let v = build_ansatz(&p, spec, common::profile()).unwrap();
    let z = kernel_zd(&p, spec, common::profile(), &v).unwrap();
    for i in 0..spec.n1 {
        assert_eq!(z.at(i, 0).im, 0.0);
    }
    assert!(z.sup() > 0.1);
}

#[test]
fn real_error_part_decays_like_the_inverse_cube() {
    let mut vals = Vec::new();
    for eps in [0.1, 0.05, 0.025] {
        let p = pair(eps, 0.0, 1.0);
        let spec = GridSpec::square(2.0 * p.d, 0.25, p.regime.symmetry()).unwrap();
        let v = build_pair(&p, spec, common::profile()).unwrap();
        let (e, _) = error_field(&v, OpTag::S1, &p).unwrap();
        let mut sup = 0.0f64;
        for i in 0..spec.n1 {
            for j in 0..spec.n2 {
                let l = (spec.x1(i) - p.d).hypot(spec.x2(j)).min((spec.x1(i) + p.d).hypot(spec.x2(j)));
                if l > 2.0 && l < 0.5 * p.d {
                    sup = sup.max(l.powi(3) * e.at(i, j).re.abs());
                }
            }
        }
        vals.push(sup);
    }
    let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |a, &v| (a.0.min(v), a.1.max(v)));
    assert!(hi / lo < 2.0, "{vals:?}");
}

#[test]
fn error_field_vanishes_for_a_unimodular_constant() {
    let p = pair(0.1, 0.0, 0.5);
    let spec = GridSpec::square(12.0, 0.25, p.regime.symmetry()).unwrap();
    let v: ComplexField = Field::from_fn(spec, |_, _| Complex64::new(1.0, 0.0));
    let (e, n) = error_field(&v, OpTag::S1, &p).unwrap();
    assert_eq!(e.sup(), 0.0);
    assert_eq!(n.total, 0.0);
}
