//! Degree-one vortex core profile.
//!
//! The radial amplitude `rho(l)` of `w = rho(l) e^{i theta}` solves
//!
//! ```text
//! rho'' + rho'/l - 2 rho rho'^2 / (1 + rho^2) + (1 - 1/l^2) (1 - rho^2)/(1 + rho^2) rho = 0
//! ```
//!
//! with `rho(0) = 0` and `rho -> 1` at infinity. The slope at the origin is found by
//! bisection shooting. Past a matching radius the outward trajectory is replaced by a
//! stable inward integration started from the exponential tail, so the stored profile
//! stays on the separatrix all the way to `ell_max`.

use crate::error::{Error, Result};

/// Radius at which the series start is imposed.
pub const ELL0: f64 = 1e-3;
const MATCH_RADIUS: f64 = 8.0;
const SLOPE_LO: f64 = 1e-4;
const SLOPE_HI: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct VortexProfile {
    pub knots: Vec<f64>,
    pub rho: Vec<f64>,
    pub drho: Vec<f64>,
    /// `1 - rho` at the knots, kept separately because `rho` rounds to 1 in the far tail.
    pub eta: Vec<f64>,
    pub slope_a: f64,
    pub tail_c0: f64,
    pub ode_tol: f64,
    step: f64,
}

fn rhs(l: f64, r: f64, dr: f64) -> f64 {
    let r2 = r * r;
    -dr / l + 2.0 * r * dr * dr / (1.0 + r2) - (1.0 - 1.0 / (l * l)) * (1.0 - r2) / (1.0 + r2) * r
}

/// Same equation written for `eta = 1 - rho`, used where `rho` is within rounding of 1.
fn rhs_eta(l: f64, e: f64, de: f64) -> f64 {
    let r = 1.0 - e;
    let den = 1.0 + r * r;
    -de / l - 2.0 * r * de * de / den + (1.0 - 1.0 / (l * l)) * e * (2.0 - e) * r / den
}

fn rk4<F: Fn(f64, f64, f64) -> f64>(f: &F, l: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let k1y = dy;
    let k1d = f(l, y, dy);
    let k2y = dy + 0.5 * h * k1d;
    let k2d = f(l + 0.5 * h, y + 0.5 * h * k1y, dy + 0.5 * h * k1d);
    let k3y = dy + 0.5 * h * k2d;
    let k3d = f(l + 0.5 * h, y + 0.5 * h * k2y, dy + 0.5 * h * k2d);
    let k4y = dy + h * k3d;
    let k4d = f(l + h, y + h * k3y, dy + h * k3d);
    (
        y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        dy + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
    )
}

/// One knot-to-knot step; near the singular origin the step is subdivided.
fn advance(l: f64, r: f64, dr: f64, step: f64) -> (f64, f64) {
    // RK4 local error scales like (h / l)^5 near the origin
    let sub = (step / (0.005 * l)).ceil().max(1.0) as usize;
    let h = step / sub as f64;
    let (mut r, mut dr) = (r, dr);
    for k in 0..sub {
        (r, dr) = rk4(&rhs, l + k as f64 * h, r, dr, h);
    }
    (r, dr)
}

/// Series start `rho = a l - a l^3 / 8`.
fn series_start(a: f64) -> (f64, f64) {
    (a * ELL0 - a / 8.0 * ELL0.powi(3), a - 3.0 * a / 8.0 * ELL0 * ELL0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shot {
    Overshoot,
    TurnsDown,
    Undecided,
}

fn shoot(a: f64, step: f64, n: usize) -> Shot {
    let (mut r, mut dr) = series_start(a);
    for i in 0..n {
        let l = ELL0 + i as f64 * step;
        (r, dr) = advance(l, r, dr, step);
        if r >= 1.0 {
            return Shot::Overshoot;
        }
        if dr < 0.0 {
            return Shot::TurnsDown;
        }
    }
    Shot::Undecided
}

/// Leading asymptotics of the decaying tail, `e^{-l} l^{-1/2} (1 - 5/(8l) + 65/(128 l^2))`.
fn tail_shape(l: f64) -> (f64, f64) {
    let p = 1.0 - 5.0 / (8.0 * l) + 65.0 / (128.0 * l * l);
    let dp = 5.0 / (8.0 * l * l) - 130.0 / (128.0 * l * l * l);
    let base = (-l).exp() / l.sqrt();
    (base * p, base * (dp - p * (1.0 + 0.5 / l)))
}

pub fn solve_profile(ell_max: f64, step: f64, tol: f64) -> Result<VortexProfile> {
    if !(ell_max >= 20.0) {
        return Err(Error::InvalidArgument(format!("ell_max = {ell_max} < 20")));
    }
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::InvalidArgument(format!("step = {step} outside (0, 1e-2]")));
    }
    if !(tol > 0.0 && tol <= 1e-8) {
        return Err(Error::InvalidArgument(format!("tol = {tol} outside (0, 1e-8]")));
    }
    let n = ((ell_max - ELL0) / step).ceil() as usize;
    let knots: Vec<f64> = (0..=n).map(|i| ELL0 + i as f64 * step).collect();

    let (mut lo, mut hi) = (SLOPE_LO, SLOPE_HI);
    if shoot(lo, step, n) != Shot::TurnsDown || shoot(hi, step, n) != Shot::Overshoot {
        return Err(Error::ShootingBracket(format!(
            "slopes {lo} and {hi} do not separate collapse from blow-up"
        )));
    }
    // bisect to the resolution of f64; tol only bounds what is required
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shoot(mid, step, n) {
            Shot::Overshoot => hi = mid,
            Shot::TurnsDown => lo = mid,
            Shot::Undecided => {
                lo = mid;
                hi = mid;
                break;
            }
        }
    }
    if (hi - lo) > tol * hi {
        return Err(Error::ShootingBracket(format!("bracket [{lo}, {hi}] wider than tol")));
    }
    let a = 0.5 * (lo + hi);

    let m = ((MATCH_RADIUS - ELL0) / step).round() as usize;
    let mut rho = vec![0.0; n + 1];
    let mut drho = vec![0.0; n + 1];
    (rho[0], drho[0]) = series_start(a);
    for i in 0..m {
        let (r, dr) = advance(knots[i], rho[i], drho[i], step);
        if !(r < 1.0 && dr > 0.0) {
            return Err(Error::ShootingBracket(format!(
                "outward trajectory left the separatrix at l = {}",
                knots[i + 1]
            )));
        }
        rho[i + 1] = r;
        drho[i + 1] = dr;
    }

    // inward sweep in eta = 1 - rho, amplitude matched to the outward value at the junction
    let eta_target = 1.0 - rho[m];
    let inward = |amp: f64, store: Option<(&mut [f64], &mut [f64])>| -> f64 {
        let (g, dg) = tail_shape(knots[n]);
        let (mut e, mut de) = (amp * g, amp * dg);
        let mut out = store;
        if let Some((er, der)) = out.as_mut() {
            er[n] = e;
            der[n] = de;
        }
        for i in (m..n).rev() {
            (e, de) = rk4(&rhs_eta, knots[i + 1], e, de, -step);
            if let Some((er, der)) = out.as_mut() {
                er[i] = e;
                der[i] = de;
            }
        }
        e
    };
    let mut amp = eta_target / inward(1.0, None);
    for _ in 0..4 {
        let got = inward(amp, None);
        if got == eta_target {
            break;
        }
        amp *= eta_target / got;
    }
    let mut eta = vec![0.0; n + 1];
    let mut deta = vec![0.0; n + 1];
    inward(amp, Some((&mut eta, &mut deta)));
    for i in (m + 1)..=n {
        rho[i] = 1.0 - eta[i];
        drho[i] = -deta[i];
    }
    for i in 0..=m {
        eta[i] = 1.0 - rho[i];
    }

    let tail_c0 = fit_tail_c0(&knots, &rho, 8.0, 14.0);
    let profile = VortexProfile {
        knots,
        rho,
        drho,
        eta,
        slope_a: a,
        tail_c0,
        ode_tol: tol,
        step,
    };
    Ok(profile)
}

/// Least-squares constant of `1 - rho = c0 e^{-l} / sqrt(l)` with the decay rate held at 1.
fn fit_tail_c0(knots: &[f64], rho: &[f64], lo: f64, hi: f64) -> f64 {
    let mut acc = 0.0;
    let mut count = 0usize;
    for (l, r) in knots.iter().zip(rho) {
        if *l >= lo && *l <= hi {
            acc += (1.0 - r).ln() + 0.5 * l.ln() + l;
            count += 1;
        }
    }
    (acc / count as f64).exp()
}

impl VortexProfile {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn ell_max(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// `(rho, rho')` at radius `ell`; negative radii are clamped to the origin.
    pub fn eval(&self, ell: f64) -> (f64, f64) {
        let ell = ell.max(0.0);
        let l0 = self.knots[0];
        if ell < l0 {
            return (self.slope_a * ell, self.slope_a);
        }
        let n = self.knots.len() - 1;
        if ell > self.knots[n] {
            let g = self.tail_c0 * (-ell).exp() / ell.sqrt();
            return (1.0 - g, g * (1.0 + 0.5 / ell));
        }
        let mut i = (((ell - l0) / self.step) as usize).min(n - 1);
        if self.knots[i] > ell {
            i -= 1;
        }
        if self.knots[i] == ell {
            return (self.rho[i], self.drho[i]);
        }
        if self.knots[i + 1] == ell {
            return (self.rho[i + 1], self.drho[i + 1]);
        }
        let h = self.knots[i + 1] - self.knots[i];
        let t = (ell - self.knots[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (y0, y1) = (self.rho[i], self.rho[i + 1]);
        let (m0, m1) = (self.drho[i] * h, self.drho[i + 1] * h);
        let r = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let dr = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        (r, dr)
    }

    /// Residual of the profile equation at interior knots, `rho''` from a sixth-order
    /// central difference of the stored `rho'`. Returns `(radius, residual)` pairs.
    pub fn ode_residuals(&self) -> Vec<(f64, f64)> {
        let n = self.knots.len();
        let h = self.step;
        (3..n - 3)
            .map(|i| {
                let d = &self.drho;
                let ddr = (45.0 * (d[i + 1] - d[i - 1]) - 9.0 * (d[i + 2] - d[i - 2]) + (d[i + 3] - d[i - 3])) / (60.0 * h);
                let l = self.knots[i];
                (l, ddr - rhs(l, self.rho[i], self.drho[i]))
            })
            .collect()
    }

    /// Linear regression of `log(1 - rho) + log(l)/2` against `l` over `[lo, hi]`,
    /// returning `(slope, intercept)`.
    pub fn tail_regression(&self, lo: f64, hi: f64) -> (f64, f64) {
        let pts: Vec<(f64, f64)> = self
            .knots
            .iter()
            .zip(&self.rho)
            .filter(|(l, _)| **l >= lo && **l <= hi)
            .map(|(l, r)| (*l, (1.0 - r).ln() + 0.5 * l.ln()))
            .collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let slope = sxy / sxx;
        (slope, my - slope * mx)
    }
}

pub fn eval_profile(p: &VortexProfile, ell: f64) -> Result<(f64, f64)> {
    if ell < 0.0 {
        return Err(Error::NegativeRadius(ell));
    }
    Ok(p.eval(ell))
}

/// `I1 = int rho rho' / (1 + rho^2)^2` and `I2 = int (1 - rho^2) rho rho' / (1 + rho^2)^3`
/// over `[0, infinity)`.
pub fn profile_integrals(p: &VortexProfile) -> (f64, f64) {
    profile_integrals_upto(p, f64::INFINITY)
}

/// Antiderivatives in `t = rho^2`: `G1(t) = -1/(2(1+t))`, `G2(t) = (1/(1+t) - 1/(1+t)^2)/2`.
fn g1(t: f64) -> f64 {
    -0.5 / (1.0 + t)
}

fn g2(t: f64) -> f64 {
    0.5 * (1.0 / (1.0 + t) - 1.0 / ((1.0 + t) * (1.0 + t)))
}

/// Integrals truncated at `upper`; the head `[0, l0]` uses the linear core and the part
/// beyond the last knot is integrated exactly in `t = rho^2`.
pub fn profile_integrals_upto(p: &VortexProfile, upper: f64) -> (f64, f64) {
    let f1 = |r: f64, dr: f64| r * dr / ((1.0 + r * r) * (1.0 + r * r));
    let f2 = |r: f64, dr: f64| (1.0 - r * r) * r * dr / (1.0 + r * r).powi(3);
    let t0 = p.rho[0] * p.rho[0];
    let mut i1 = g1(t0) - g1(0.0);
    let mut i2 = g2(t0) - g2(0.0);

    let last = p.knots.iter().rposition(|l| *l <= upper).unwrap_or(0);
    // composite Simpson on pairs of intervals, trapezoid for a leftover one
    let h = p.step;
    let mut k = 0;
    while k + 2 <= last {
        let a1 = f1(p.rho[k], p.drho[k]);
        let b1 = f1(p.rho[k + 1], p.drho[k + 1]);
        let c1 = f1(p.rho[k + 2], p.drho[k + 2]);
        let a2 = f2(p.rho[k], p.drho[k]);
        let b2 = f2(p.rho[k + 1], p.drho[k + 1]);
        let c2 = f2(p.rho[k + 2], p.drho[k + 2]);
        i1 += h / 3.0 * (a1 + 4.0 * b1 + c1);
        i2 += h / 3.0 * (a2 + 4.0 * b2 + c2);
        k += 2;
    }
    if k < last {
        i1 += 0.5 * h * (f1(p.rho[k], p.drho[k]) + f1(p.rho[k + 1], p.drho[k + 1]));
        i2 += 0.5 * h * (f2(p.rho[k], p.drho[k]) + f2(p.rho[k + 1], p.drho[k + 1]));
    }
    if upper.is_infinite() {
        let tl = p.rho[last] * p.rho[last];
        i1 += g1(1.0) - g1(tl);
        i2 += g2(1.0) - g2(tl);
    }
    (i1, i2)
}
