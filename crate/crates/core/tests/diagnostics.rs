//! Winding numbers, vortex detection, energy and charge, corrector norms.

mod common;

use num_complex::Complex64;
use std::f64::consts::PI;
use vortex_solitons::ansatz::{build_ansatz, ModelParams, Regime, VARRHO};
use vortex_solitons::diagnostics::{
    bogomolny_margin, corrector_norms, detect_vortices, detect_vortices_lattice, diagnose, energy_charge,
    full_plane_winding, winding_number, LatticeRect, SphereGrid,
};
use vortex_solitons::fields::{ComplexField, Field, GridSpec, Symmetry};
use vortex_solitons::Error;

fn quarter(l: f64, h: f64, f: impl Fn(f64, f64) -> Complex64) -> ComplexField {
    Field::from_fn(GridSpec::square(l, h, Symmetry::Pair).unwrap(), |x1, x2| f(x1, x2))
}

#[test]
fn windings_of_unit_maps() {
    // centred at (5, 0): Re even and Im odd in x2, as the pair parity demands
    let f = quarter(10.0, 0.25, |x1, x2| Complex64::new(x1 - 5.0, x2) / (x1 - 5.0).hypot(x2).max(1e-300));
    let around = LatticeRect { i0: 12, j0: -8, i1: 28, j1: 8 };
    assert_eq!(winding_number(&f, around).unwrap(), 1);
    let g = f.map(|z| z.conj());
    assert_eq!(winding_number(&g, around).unwrap(), -1);
    let away = LatticeRect { i0: 30, j0: 2, i1: 38, j1: 10 };
    assert_eq!(winding_number(&f, away).unwrap(), 0);
    let through = LatticeRect { i0: 20, j0: -4, i1: 26, j1: 4 };
    assert!(matches!(winding_number(&f, through), Err(Error::ZeroOnLoop)));
    assert!(winding_number(&f, LatticeRect { i0: 5, j0: 0, i1: 2, j1: 3 }).is_err());
}

#[test]
fn ansatz_cores_are_found_with_their_charges() {
    let p = ModelParams::new(Regime::PairWm, 0.1, 0.0, 1.0).unwrap();
    let v = build_ansatz(&p, GridSpec::square(20.0, 0.25, Symmetry::Pair).unwrap(), common::profile()).unwrap();
    let q = detect_vortices(&v);
    assert_eq!(q.len(), 1);
    assert_eq!(q[0].charge, 1);
    assert!((q[0].position[0] - 10.0).abs() <= 0.25 && q[0].position[1].abs() <= 0.25);
    let (full, m1, m2) = v.expand_full();
    let all = detect_vortices_lattice(&full, m1, m2, [-20.0, -20.0], [0.25, 0.25]);
    let charges: Vec<i32> = all.iter().map(|x| x.charge).collect();
    assert_eq!(charges, vec![-1, 1]);
    assert!((all[0].position[0] + 10.0).abs() <= 0.25);
    assert_eq!(full_plane_winding(&v).unwrap(), 0);
    let one = quarter(20.0, 0.25, |_, _| Complex64::new(1.0, 0.0));
    assert!(detect_vortices(&one).is_empty());
}

#[test]
fn degree_one_map_has_bogomolny_energy() {
    let (l, h) = (30.0f64, 0.1f64);
    let n = (2.0 * l / h).round() as usize + 1;
    let mut vals = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            vals.push(Complex64::new(-l + a as f64 * h, -l + b as f64 * h));
        }
    }
    let (e, q) = energy_charge(&SphereGrid::from_stereo(&vals, n, n, h, h).unwrap()).unwrap();
    assert!((e - 8.0 * PI).abs() <= 0.02 * 8.0 * PI, "E = {e}");
    assert!((q.abs() - 1.0).abs() <= 0.01, "Q = {q}");
    assert!(bogomolny_margin(e, q) >= -0.02 * 8.0 * PI);
    // flipping m2 reverses the orientation
    let flipped: Vec<Complex64> = vals.iter().map(|z| z.conj()).collect();
    let (e2, q2) = energy_charge(&SphereGrid::from_stereo(&flipped, n, n, h, h).unwrap()).unwrap();
    assert!((e2 - e).abs() <= 1e-9 * e);
    assert!((q2 + q).abs() <= 1e-9);
}

#[test]
fn constant_and_translated_maps() {
    let n = 41;
    let c = vec![Complex64::new(0.3, -0.2); n * n];
    assert_eq!(energy_charge(&SphereGrid::from_stereo(&c, n, n, 0.25, 0.25).unwrap()).unwrap(), (0.0, 0.0));
    let bump = |x: f64, y: f64| Complex64::new(x, y) * 2.0 * (-(x * x + y * y)).exp();
    let sample = |sx: f64| {
        let mut v = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                v.push(bump(-5.0 + a as f64 * 0.25 - sx, -5.0 + b as f64 * 0.25));
            }
        }
        energy_charge(&SphereGrid::from_stereo(&v, n, n, 0.25, 0.25).unwrap()).unwrap()
    };
    let (e0, q0) = sample(0.0);
    let (e1, q1) = sample(0.75);
    assert!(e0 > 0.0);
    assert!((e0 - e1).abs() <= 1e-12 * e0 && (q0 - q1).abs() <= 1e-12);
    let bad = vec![Complex64::new(f64::NAN, 0.0); 4];
    assert!(SphereGrid::from_stereo(&bad, 2, 2, 1.0, 1.0).is_err());
}

#[test]
fn corrector_norms_of_pure_phase_changes() {
    let p = ModelParams::new(Regime::PairWm, 0.1, 0.0, 1.0).unwrap();
    let spec = GridSpec::square(20.0, 0.25, Symmetry::Pair).unwrap();
    let v = build_ansatz(&p, spec, common::profile()).unwrap();
    let zero = corrector_norms(&v, &v, &p).unwrap();
    assert_eq!(zero.star, 0.0);
    let delta = 1e-3;
    // the phase must be odd in x2 to respect the parity of V; a linear one has exact differences
    let u = Field::from_fn(spec, |x1, x2| {
        let (i, j) = ((x1 / 0.25).round() as usize, (x2 / 0.25).round() as usize);
        v.at(i, j) * Complex64::from_polar(1.0, delta * x2 / 20.0)
    });
    let n = corrector_norms(&u, &v, &p).unwrap();
    // oracle: sups of l^varrho |psi1| and l^(1 + varrho) |grad psi1| over the outer region
    let (mut a, mut b) = (0.0f64, 0.0f64);
    for i in 0..spec.n1 - 1 {
        for j in 0..spec.n2 - 1 {
            let (x1, x2) = (spec.x1(i), spec.x2(j));
            let l = (x1 - 10.0).hypot(x2).min((x1 + 10.0).hypot(x2));
            if l > 2.0 && 20.0 - x1 >= 4.0 && 20.0 - x2 >= 4.0 {
                a = a.max(l.powf(VARRHO) * delta * x2 / 20.0);
                b = b.max(l.powf(1.0 + VARRHO) * delta / 20.0);
            }
        }
    }
    assert!((n.parts["psi1_outer"] - a).abs() <= 1e-12, "{:?}", n.parts);
    assert!((n.parts["grad_psi1_outer"] - b).abs() <= 1e-10 * b);
    assert!(n.parts["psi2_outer"] <= 1e-12);
    assert!(n.parts["grad_psi2_outer"] <= 1e-10);
    assert!(n.parts["phi_c2_inner"] > 0.0);
}

#[test]
fn diagnose_pair_ansatz() {
    let p = ModelParams::new(Regime::PairSch, 0.1, 0.25, 1.0).unwrap();
    let v = build_ansatz(&p, GridSpec::square(20.0, 0.25, Symmetry::Pair).unwrap(), common::profile()).unwrap();
    let r = diagnose(&v, &v, &p).unwrap();
    assert!(r.charge.abs() < 0.05, "Q = {}", r.charge);
    // each core carries about 4 pi log(L) of exchange energy
    assert!(r.energy > 8.0 * PI);
    assert!(r.bogomolny_margin >= -1e-6 * r.energy);
    assert_eq!(r.weighted_norms["star"], 0.0);
    assert_eq!(r.residuals["full_plane_winding"], 0.0);
    assert!(r.residuals["S2_l2"] > 0.0);
    assert_eq!(r.vortices.len(), 1);
}
