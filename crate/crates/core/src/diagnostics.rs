//! Winding numbers, vortex detection, energy and charge, weighted corrector norms.

use crate::ansatz::{ModelParams, VARRHO};
use crate::error::{Error, Result};
use crate::fields::{c_k_surrogate, nearest_distance, ComplexField, Field, ScalarField, Symmetry};
use crate::solver::operators::{apply_s, OpTag};
use crate::stereo::{unproject, SpherePoint};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Closed lattice rectangle `[i0, i1] x [j0, j1]`; negative indices are parity ghosts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeRect {
    pub i0: isize,
    pub j0: isize,
    pub i1: isize,
    pub j1: isize,
}

/// Degree of `f / |f|` around `loop_`, traversed counter-clockwise.
pub fn winding_number(f: &ComplexField, loop_: LatticeRect) -> Result<i32> {
    let s = f.spec;
    let LatticeRect { i0, j0, i1, j1 } = loop_;
    let (n1, n2) = (s.n1 as isize, s.n2 as isize);
    if !(i0 < i1 && j0 < j1 && i0 > -n1 && j0 > -n2 && i1 < n1 && j1 < n2) {
        return Err(Error::InvalidArgument(format!("bad lattice loop {loop_:?}")));
    }
    let mut pts = Vec::new();
    pts.extend((i0..i1).map(|i| (i, j0)));
    pts.extend((j0..j1).map(|j| (i1, j)));
    pts.extend((i0 + 1..=i1).rev().map(|i| (i, j1)));
    pts.extend((j0 + 1..=j1).rev().map(|j| (i0, j)));
    let vals: Vec<Complex64> = pts.iter().map(|&(i, j)| f.ghost(i, j)).collect();
    loop_degree(&vals)
}

/// Sum of principal phase increments around a closed polygon of samples, over `2 pi`.
fn loop_degree(vals: &[Complex64]) -> Result<i32> {
    if vals.iter().any(|v| v.norm_sqr() == 0.0 || !v.is_finite()) {
        return Err(Error::ZeroOnLoop);
    }
    let mut total = 0.0;
    for k in 0..vals.len() {
        let next = vals[(k + 1) % vals.len()];
        total += (next * vals[k].conj()).arg();
    }
    Ok((total / (2.0 * PI)).round() as i32)
}

/// Winding of the full-plane reflection around its outer boundary.
pub fn full_plane_winding(f: &ComplexField) -> Result<i32> {
    let s = f.spec;
    let (n1, n2) = (s.n1 as isize, s.n2 as isize);
    winding_number(
        f,
        LatticeRect {
            i0: -(n1 - 1),
            j0: -(n2 - 1),
            i1: n1 - 1,
            j1: n2 - 1,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vortex {
    pub position: [f64; 2],
    pub charge: i32,
}

/// Zeros of `f` on the stored quarter (axes included), with their degrees.
///
/// Each lattice point is enclosed by the plaquette of the dual lattice of cell averages,
/// so zeros sitting on lattice points or on the symmetry axes are still caught. Hits
/// within Chebyshev distance 2 are merged into one vortex at their centroid.
pub fn detect_vortices(f: &ComplexField) -> Vec<Vortex> {
    let s = f.spec;
    scan_zeros(
        |i, j| f.ghost(i, j),
        (0, s.n1 as isize - 1),
        (0, s.n2 as isize - 1),
        |i, j| [s.x1(i as usize), s.x2(j as usize)],
    )
}

/// Same sweep over a plain row-major lattice `x0 + (a h1, b h2)` without any symmetry;
/// points on the outermost ring are not tested.
pub fn detect_vortices_lattice(data: &[Complex64], m1: usize, m2: usize, x0: [f64; 2], h: [f64; 2]) -> Vec<Vortex> {
    if m1 < 3 || m2 < 3 || data.len() != m1 * m2 {
        return Vec::new();
    }
    scan_zeros(
        |a, b| data[a as usize * m2 + b as usize],
        (1, m1 as isize - 1),
        (1, m2 as isize - 1),
        |a, b| [x0[0] + a as f64 * h[0], x0[1] + b as f64 * h[1]],
    )
}

fn scan_zeros<G, P>(get: G, ir: (isize, isize), jr: (isize, isize), pos: P) -> Vec<Vortex>
where
    G: Fn(isize, isize) -> Complex64,
    P: Fn(isize, isize) -> [f64; 2],
{
    // dual value of cell [a, a + 1] x [b, b + 1]
    let dual = |a: isize, b: isize| (get(a, b) + get(a + 1, b) + get(a, b + 1) + get(a + 1, b + 1)) * 0.25;
    let mut hits: Vec<(isize, isize, i32)> = Vec::new();
    for i in ir.0..ir.1 {
        for j in jr.0..jr.1 {
            let ring = [dual(i - 1, j - 1), dual(i, j - 1), dual(i, j), dual(i - 1, j)];
            if let Ok(w) = loop_degree(&ring) {
                if w != 0 {
                    hits.push((i, j, w));
                }
            }
        }
    }
    let mut clusters: Vec<Vec<(isize, isize, i32)>> = Vec::new();
    for h in hits {
        let near: Vec<usize> = clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|p| (p.0 - h.0).abs().max((p.1 - h.1).abs()) <= 2))
            .map(|(k, _)| k)
            .collect();
        let mut merged = vec![h];
        for &k in near.iter().rev() {
            merged.extend(clusters.remove(k));
        }
        clusters.push(merged);
    }
    let mut out: Vec<Vortex> = clusters
        .iter()
        .filter_map(|c| {
            let charge: i32 = c.iter().map(|p| p.2).sum();
            if charge == 0 {
                return None;
            }
            let m = c.len() as f64;
            let mut position = [0.0, 0.0];
            for p in c {
                let x = pos(p.0, p.1);
                position[0] += x[0] / m;
                position[1] += x[1] / m;
            }
            Some(Vortex { position, charge })
        })
        .collect();
    out.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
    out
}

/// Uniform full-plane sample of a map into `S^2`, row-major in `x1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub n1: usize,
    pub n2: usize,
    pub h1: f64,
    pub h2: f64,
    pub data: Vec<SpherePoint>,
}

impl SphereGrid {
    pub fn from_stereo(values: &[Complex64], n1: usize, n2: usize, h1: f64, h2: f64) -> Result<Self> {
        if values.len() != n1 * n2 || n1 < 2 || n2 < 2 {
            return Err(Error::InvalidArgument("sample count does not match the grid".into()));
        }
        let data = values.iter().map(|&v| unproject(v)).collect::<Result<Vec<_>>>()?;
        Ok(SphereGrid { n1, n2, h1, h2, data })
    }

    /// Full-plane reflection of a quarter field.
    pub fn from_field(f: &ComplexField) -> Result<Self> {
        let (vals, m1, m2) = f.expand_full();
        SphereGrid::from_stereo(&vals, m1, m2, f.spec.h1, f.spec.h2)
    }

    fn at(&self, i: usize, j: usize) -> [f64; 3] {
        self.data[i * self.n2 + j].as_array()
    }
}

/// `E = int |d1 m|^2 + |d2 m|^2` and `Q = (1 / 4 pi) int m . (d1 m x d2 m)` by the
/// trapezoidal rule, with central differences inside and one-sided ones on the edges.
pub fn energy_charge(m: &SphereGrid) -> Result<(f64, f64)> {
    if let Some(p) = m.data.iter().find(|p| (p.norm_sq() - 1.0).abs() > 1e-6) {
        return Err(Error::InvalidArgument(format!("|m|^2 = {} is not 1", p.norm_sq())));
    }
    let diff = |a: [f64; 3], b: [f64; 3], h: f64| [(a[0] - b[0]) / h, (a[1] - b[1]) / h, (a[2] - b[2]) / h];
    let (mut e, mut q) = (0.0, 0.0);
    for i in 0..m.n1 {
        let (ip, im, s1) = edge(i, m.n1, m.h1);
        let w1 = if i == 0 || i == m.n1 - 1 { 0.5 } else { 1.0 };
        for j in 0..m.n2 {
            let (jp, jm, s2) = edge(j, m.n2, m.h2);
            let w2 = if j == 0 || j == m.n2 - 1 { 0.5 } else { 1.0 };
            let d1 = diff(m.at(ip, j), m.at(im, j), s1);
            let d2 = diff(m.at(i, jp), m.at(i, jm), s2);
            let c = m.at(i, j);
            let w = w1 * w2 * m.h1 * m.h2;
            e += w * (dot(d1, d1) + dot(d2, d2));
            q += w * dot(c, cross(d1, d2));
        }
    }
    Ok((e, q / (4.0 * PI)))
}

fn edge(i: usize, n: usize, h: f64) -> (usize, usize, f64) {
    if i == 0 {
        (1, 0, h)
    } else if i == n - 1 {
        (n - 1, n - 2, h)
    } else {
        (i + 1, i - 1, 2.0 * h)
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `E - 8 pi |Q|`, nonnegative up to discretization error.
pub fn bogomolny_margin(energy: f64, charge: f64) -> f64 {
    energy - 8.0 * PI * charge.abs()
}

/// Width of the strip along the outer Dirichlet boundary left out of the outer norms.
pub const BOUNDARY_LAYER: f64 = 4.0;

/// Named pieces of the corrector norm and their sum `star`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectorNorms {
    pub star: f64,
    pub parts: BTreeMap<String, f64>,
}

/// Surrogates of the corrector norm of `u` relative to `V_d`.
///
/// Inside the cores the correction is `phi = u - V`. Outside, `psi = -i log(u / V)`, so a
/// pure phase change `u = V e^{i delta}` gives `psi1 = delta` and `psi2 = 0` exactly. The
/// weights use the distance to the nearest centre. The pair takes `C^2` and `C^1`
/// surrogates of `phi` on `l < 2` and `l < 3`; the ring takes the `W^{2,14}` norm of `phi`
/// on `l < 3`.
pub fn corrector_norms(u: &ComplexField, v: &ComplexField, params: &ModelParams) -> Result<CorrectorNorms> {
    let s = u.spec;
    if v.spec != s {
        return Err(Error::InvalidArgument("V_d lives on another grid".into()));
    }
    let centers = params.centers();
    let ell = |x1: f64, x2: f64| nearest_distance(&centers, x1, x2);
    let phi = Field {
        spec: s,
        data: u.data.iter().zip(&v.data).map(|(a, b)| a - b).collect(),
    };
    let mut psi1: ScalarField = Field::zeros(s);
    let mut psi2: ComplexField = Field::zeros(s);
    for k in 0..s.len() {
        if v.data[k].norm() >= 0.1 && u.data[k].norm_sqr() > 0.0 {
            let l = (u.data[k] / v.data[k]).ln();
            psi1.data[k] = l.im;
            psi2.data[k] = Complex64::new(-l.re, 0.0);
        }
    }
    let mut parts = BTreeMap::new();
    if s.symmetry == Symmetry::Pair {
        parts.insert("phi_c2_inner".to_string(), c_k_surrogate(&phi, 2, &|x1, x2| ell(x1, x2) < 2.0));
        parts.insert("phi_c1_inner".to_string(), c_k_surrogate(&phi, 1, &|x1, x2| ell(x1, x2) < 3.0));
    } else {
        parts.insert("phi_w2p_inner".to_string(), w2p_inner(&phi, &ell));
    }
    let (mut a, mut b, mut c, mut d) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (ih1, ih2) = (0.5 / s.h1, 0.5 / s.h2);
    for i in 0..s.n1 - 1 {
        for j in 0..s.n2 - 1 {
            let l = ell(s.x1(i), s.x2(j));
            if l <= 2.0 || s.l1 - s.x1(i) < BOUNDARY_LAYER || s.l2 - s.x2(j) < BOUNDARY_LAYER {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let g1 = ((psi1.ghost(ii + 1, jj) - psi1.ghost(ii - 1, jj)) * ih1)
                .hypot((psi1.ghost(ii, jj + 1) - psi1.ghost(ii, jj - 1)) * ih2);
            let g2 = ((psi2.ghost(ii + 1, jj) - psi2.ghost(ii - 1, jj)).re * ih1)
                .hypot((psi2.ghost(ii, jj + 1) - psi2.ghost(ii, jj - 1)).re * ih2);
            a = a.max(l.powf(VARRHO) * psi1.at(i, j).abs());
            b = b.max(l.powf(1.0 + VARRHO) * g1);
            c = c.max(l.powf(1.0 + VARRHO) * psi2.at(i, j).re.abs());
            d = d.max(l.powf(2.0 + VARRHO) * g2);
        }
    }
    parts.insert("psi1_outer".to_string(), a);
    parts.insert("grad_psi1_outer".to_string(), b);
    parts.insert("psi2_outer".to_string(), c);
    parts.insert("grad_psi2_outer".to_string(), d);
    let star = parts.values().sum();
    Ok(CorrectorNorms { star, parts })
}

/// `(int |phi|^14 + |D phi|^14 + |D^2 phi|^14)^{1/14}` over `l < 3`, both halves of the
/// core counted.
fn w2p_inner(phi: &ComplexField, ell: &dyn Fn(f64, f64) -> f64) -> f64 {
    let s = phi.spec;
    let (ih1, ih2) = (0.5 / s.h1, 0.5 / s.h2);
    let (q1, q2) = (1.0 / (s.h1 * s.h1), 1.0 / (s.h2 * s.h2));
    let mut acc = 0.0;
    for i in 0..s.n1 - 1 {
        for j in 0..s.n2 - 1 {
            if ell(s.x1(i), s.x2(j)) >= 3.0 {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let g = |a: isize, b: isize| phi.ghost(ii + a, jj + b);
            let c = g(0, 0);
            let d1 = (g(1, 0) - g(-1, 0)) * ih1;
            let d2 = (g(0, 1) - g(0, -1)) * ih2;
            let d11 = (g(1, 0) + g(-1, 0) - c * 2.0) * q1;
            let d22 = (g(0, 1) + g(0, -1) - c * 2.0) * q2;
            let d12 = (g(1, 1) - g(-1, 1) - g(1, -1) + g(-1, -1)) * (ih1 * ih2);
            let grad = (d1.norm_sqr() + d2.norm_sqr()).sqrt();
            let hess = (d11.norm_sqr() + 2.0 * d12.norm_sqr() + d22.norm_sqr()).sqrt();
            acc += s.trap_weight(i, j) * (c.norm().powi(14) + grad.powi(14) + hess.powi(14));
        }
    }
    (2.0 * acc).powf(1.0 / 14.0)
}

/// Everything the verifier reports about one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsReport {
    pub energy: f64,
    pub charge: f64,
    pub vortices: Vec<Vortex>,
    pub bogomolny_margin: f64,
    pub weighted_norms: BTreeMap<String, f64>,
    pub residuals: BTreeMap<String, f64>,
}

/// Diagnoses `u` against the ansatz `v` it was solved from.
pub fn diagnose(u: &ComplexField, v: &ComplexField, params: &ModelParams) -> Result<DiagnosticsReport> {
    let (energy, charge) = energy_charge(&SphereGrid::from_field(u)?)?;
    let norms = corrector_norms(u, v, params)?;
    let mut weighted_norms = norms.parts;
    weighted_norms.insert("star".to_string(), norms.star);
    let tag: OpTag = params.regime.tag();
    let s = apply_s(u, tag, params)?;
    let mut residuals = BTreeMap::new();
    residuals.insert(format!("{}_l2", tag.name()), quarter_l2(&s));
    residuals.insert(format!("{}_sup", tag.name()), s.sup());
    residuals.insert("full_plane_winding".to_string(), full_plane_winding(u)? as f64);
    Ok(DiagnosticsReport {
        energy,
        charge,
        vortices: detect_vortices(u),
        bogomolny_margin: bogomolny_margin(energy, charge),
        weighted_norms,
        residuals,
    })
}

/// Trapezoidal L2 norm over the stored quarter.
pub fn quarter_l2(f: &ComplexField) -> f64 {
    let s = f.spec;
    let mut acc = 0.0;
    for i in 0..s.n1 {
        for j in 0..s.n2 {
            acc += s.trap_weight(i, j) * f.at(i, j).norm_sqr();
        }
    }
    acc.sqrt()
}
