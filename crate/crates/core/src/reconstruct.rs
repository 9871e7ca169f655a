//! Space-time solitons rebuilt from a solved field, and their residuals in the original
//! equations on the sphere.
//!
//! ```text
//! U(s1, s2) = u(s1, s2 / sqrt(1 - c^2))
//! pair: psi(t, tau, s1, s2)     = U(s1, s2 - c tau - w t) e^{i tau}
//! ring: psi(t, tau, s1, s2, s3) = U(r, s3 - c tau - w t) e^{i tau},  r = |(s1, s2)|
//! wave map:      box m + |Dm|^2 m = 0
//! Schrodinger:   d_t m + m x box m = 0
//! ```
//!
//! with `box = d_tau^2 - Laplacian_s` and `|Dm|^2 = |d_tau m|^2 - |grad_s m|^2`. The
//! drift `w` vanishes for wave maps. `U` is a `C^4` quintic spline through the parity
//! extension of `u`, so finite differences of the samples converge at second order.

use crate::ansatz::ModelParams;
use crate::error::{Error, Result};
use crate::fields::{ComplexField, Spline2};
use crate::stereo::{unproject, SpherePoint};
use num_complex::Complex64;

/// Smooth evaluator of the unscaled profile `U`.
#[derive(Clone, Debug)]
pub struct Evaluator {
    spline: Spline2,
    stretch: f64,
    /// Lattice spacing of the solved field.
    pub h: f64,
    pub ring: bool,
}

pub fn unscale(u: &ComplexField, params: &ModelParams) -> Result<Evaluator> {
    let c = params.c;
    if !(c.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!("|c| = {} is not below 1", c.abs())));
    }
    Ok(Evaluator {
        spline: Spline2::from_field(u),
        stretch: 1.0 / (1.0 - c * c).sqrt(),
        h: u.spec.h1.max(u.spec.h2),
        ring: params.regime.is_ring(),
    })
}

impl Evaluator {
    /// `U(s1, s2)` in the unscaled chart.
    pub fn eval(&self, s1: f64, s2: f64) -> Result<Complex64> {
        let x2 = s2 * self.stretch;
        self.spline.eval(s1, x2).ok_or(Error::OutOfDomain(s1, x2))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeSample {
    pub t: f64,
    pub tau: f64,
    pub s: Vec<f64>,
    pub m: SpherePoint,
    pub psi: Complex64,
}

/// Drift speed along the travel axis: `omega` for Schrodinger maps, 0 for wave maps.
fn drift(params: &ModelParams) -> f64 {
    if params.regime.is_schrodinger() {
        params.omega
    } else {
        0.0
    }
}

/// `psi` at one space-time point; `s` has 2 entries for the pair, 3 for the ring.
pub fn spacetime_psi(ev: &Evaluator, params: &ModelParams, t: f64, tau: f64, s: &[f64]) -> Result<Complex64> {
    let shift = params.c * tau + drift(params) * t;
    let u = match (ev.ring, s.len()) {
        (false, 2) => ev.eval(s[0], s[1] - shift)?,
        (true, 3) => ev.eval(s[0].hypot(s[1]), s[2] - shift)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{} spatial coordinates for a {} field",
                s.len(),
                if ev.ring { "ring" } else { "pair" }
            )))
        }
    };
    Ok(u * Complex64::from_polar(1.0, tau))
}

pub fn spacetime_field(ev: &Evaluator, params: &ModelParams, t: f64, tau: f64, s: &[f64]) -> Result<SpacetimeSample> {
    let psi = spacetime_psi(ev, params, t, tau, s)?;
    Ok(SpacetimeSample {
        t,
        tau,
        s: s.to_vec(),
        m: unproject(psi)?,
        psi,
    })
}

/// Sample points and finite-difference spacing for [`pde_residual`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBlock {
    pub times: Vec<f64>,
    pub taus: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub delta: f64,
}

impl SampleBlock {
    /// Planar `k x k` window `[c - half, c + half]^2`; for the ring the two coordinates are
    /// `(r, s3)` until [`SampleBlock::rotated_3d`] lifts them.
    pub fn window(center: [f64; 2], half: f64, k: usize, times: Vec<f64>, taus: Vec<f64>, delta: f64) -> Self {
        let step = if k > 1 { 2.0 * half / (k - 1) as f64 } else { 0.0 };
        let mut points = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                points.push(vec![center[0] - half + a as f64 * step, center[1] - half + b as f64 * step]);
            }
        }
        SampleBlock {
            times,
            taus,
            points,
            delta,
        }
    }

    /// Lifts planar `(r, s3)` points to 3-D by rotating about the `s3` axis.
    pub fn rotated_3d(mut self, angle: f64) -> Self {
        let (sn, cs) = angle.sin_cos();
        for p in &mut self.points {
            let (r, z) = (p[0], p[1]);
            *p = vec![r * cs, r * sn, z];
        }
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualNorms {
    /// Root mean square of `|R|` over the used samples.
    pub l2: f64,
    pub sup: f64,
    pub count: usize,
}

/// Residual of the sphere-valued equation of the regime at every block point.
///
/// Derivatives are central differences of spacing `delta` in `tau`, every `s_k` and, for
/// Schrodinger maps, `t`. Points within `2h` of a moving core are skipped, as are points
/// whose stencil leaves the stored domain (the one-cell boundary margin).
pub fn pde_residual(ev: &Evaluator, params: &ModelParams, block: &SampleBlock) -> Result<ResidualNorms> {
    let dl = block.delta;
    if !(dl > 0.0) {
        return Err(Error::InvalidArgument("sample spacing must be positive".into()));
    }
    if dl > ev.h {
        return Err(Error::Unresolved { spacing: dl, h: ev.h });
    }
    let sch = params.regime.is_schrodinger();
    let (mut acc, mut sup, mut count) = (0.0, 0.0f64, 0usize);
    for &t in &block.times {
        for &tau in &block.taus {
            let shift = params.c * tau + drift(params) * t;
            for p in &block.points {
                if near_core(ev, params, p, shift) {
                    continue;
                }
                match residual_at(ev, params, t, tau, p, dl, sch) {
                    Ok(r) => {
                        let n = norm3(r);
                        acc += n * n;
                        sup = sup.max(n);
                        count += 1;
                    }
                    Err(Error::OutOfDomain(..)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(ResidualNorms {
        l2: if count > 0 { (acc / count as f64).sqrt() } else { 0.0 },
        sup,
        count,
    })
}

fn near_core(ev: &Evaluator, params: &ModelParams, p: &[f64], shift: f64) -> bool {
    let (a, b) = if ev.ring && p.len() == 3 {
        (p[0].hypot(p[1]), p[2])
    } else {
        (p[0], p[1])
    };
    let along = (b - shift) * ev.stretch;
    let dist = (a.abs() - params.d).hypot(along);
    dist < 2.0 * ev.h
}

fn residual_at(
    ev: &Evaluator,
    params: &ModelParams,
    t: f64,
    tau: f64,
    s: &[f64],
    dl: f64,
    sch: bool,
) -> Result<[f64; 3]> {
    let m = |t: f64, tau: f64, s: &[f64]| -> Result<[f64; 3]> {
        Ok(unproject(spacetime_psi(ev, params, t, tau, s)?)?.as_array())
    };
    let c = m(t, tau, s)?;
    let (tp, tm) = (m(t, tau + dl, s)?, m(t, tau - dl, s)?);
    let mut boxm = second(tp, c, tm, dl);
    let dtau = first(tp, tm, dl);
    let mut dm2 = dot(dtau, dtau);
    let mut q = s.to_vec();
    for k in 0..s.len() {
        q[k] = s[k] + dl;
        let sp = m(t, tau, &q)?;
        q[k] = s[k] - dl;
        let sm = m(t, tau, &q)?;
        q[k] = s[k];
        let d2 = second(sp, c, sm, dl);
        let d1 = first(sp, sm, dl);
        for a in 0..3 {
            boxm[a] -= d2[a];
        }
        dm2 -= dot(d1, d1);
    }
    if sch {
        let dt = first(m(t + dl, tau, s)?, m(t - dl, tau, s)?, dl);
        let x = cross(c, boxm);
        Ok([dt[0] + x[0], dt[1] + x[1], dt[2] + x[2]])
    } else {
        Ok([boxm[0] + dm2 * c[0], boxm[1] + dm2 * c[1], boxm[2] + dm2 * c[2]])
    }
}

fn first(p: [f64; 3], m: [f64; 3], dl: f64) -> [f64; 3] {
    [(p[0] - m[0]) / (2.0 * dl), (p[1] - m[1]) / (2.0 * dl), (p[2] - m[2]) / (2.0 * dl)]
}

fn second(p: [f64; 3], c: [f64; 3], m: [f64; 3], dl: f64) -> [f64; 3] {
    let q = 1.0 / (dl * dl);
    [(p[0] - 2.0 * c[0] + m[0]) * q, (p[1] - 2.0 * c[1] + m[1]) * q, (p[2] - 2.0 * c[2] + m[2]) * q]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Richardson-style order estimate `log2(|R_d - R_{d/2}| / |R_{d/2} - R_{d/4}|)` from
/// pointwise residuals at three spacings, using the block points common to all three.
pub fn refinement_order(ev: &Evaluator, params: &ModelParams, block: &SampleBlock) -> Result<f64> {
    let sch = params.regime.is_schrodinger();
    let mut diffs = [0.0f64; 2];
    for &t in &block.times {
        for &tau in &block.taus {
            let shift = params.c * tau + drift(params) * t;
            for p in &block.points {
                if near_core(ev, params, p, shift) {
                    continue;
                }
                let r = [1.0, 0.5, 0.25].map(|f| residual_at(ev, params, t, tau, p, block.delta * f, sch));
                if let [Ok(a), Ok(b), Ok(c)] = r {
                    for k in 0..3 {
                        diffs[0] += (a[k] - b[k]).powi(2);
                        diffs[1] += (b[k] - c[k]).powi(2);
                    }
                }
            }
        }
    }
    if diffs[1] == 0.0 {
        return Err(Error::InvalidArgument("no usable samples for the order estimate".into()));
    }
    Ok(0.5 * (diffs[0] / diffs[1]).log2())
}
