//! The reduced force-balance equation `c(d) = 0`: leading-order formula, its root and
//! the numeric multiplier curve.
//!
//! ```text
//! pair: c(d) = -pi / (4d) + pi eps / 4 - pi eps kappa / 2
//! ring: c(d) = pi [ -log d / (8d) + (1 - 2 kappa) eps |log eps| / 4 ]
//! ```
//!
//! The overall normalization of `c` is unknown, so only the zero set is meaningful. The
//! sign of the leading formula is matched to the numeric curve at `predict_d / 2`.

use crate::ansatz::ModelParams;
use crate::error::{Error, Result};
use crate::fields::GridSpec;
use crate::profile::VortexProfile;
use crate::solver::{solve_at, SolveOptions};
use std::f64::consts::{E, PI};

/// Leading-order multiplier with unit normalization.
pub fn leading_c(d: f64, params: &ModelParams) -> f64 {
    let (e, k) = (params.eps, params.kappa);
    if params.regime.is_ring() {
        PI * (-d.ln() / (8.0 * d) + (1.0 - 2.0 * k) * e * e.ln().abs() / 4.0)
    } else {
        -PI / (4.0 * d) + PI * e / 4.0 - e * k * PI / 2.0
    }
}

/// Root of the leading-order formula: `1 / ((1 - 2 kappa) eps)` for the pair, and the root
/// `d > e` of `log d / d = 2 (1 - 2 kappa) eps |log eps|` for the ring.
pub fn predict_d(params: &ModelParams) -> Result<f64> {
    let (e, k) = (params.eps, params.kappa);
    if 1.0 - 2.0 * k <= 0.0 {
        return Err(Error::InvalidArgument(format!("kappa = {k} violates 1 - 2 kappa > 0")));
    }
    if !params.regime.is_ring() {
        return Ok(1.0 / ((1.0 - 2.0 * k) * e));
    }
    let rhs = 2.0 * (1.0 - 2.0 * k) * e * e.ln().abs();
    if rhs >= 1.0 / E {
        return Err(Error::NoRoot(format!(
            "log d / d = {rhs} has no root on the decreasing branch"
        )));
    }
    // log d / d decreases from 1/e at d = e to 0, so bisection on [e, hi] is safe
    let g = |d: f64| d.ln() / d - rhs;
    let (mut lo, mut hi) = (E, E);
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCurve {
    pub regime: crate::ansatz::Regime,
    pub d_values: Vec<f64>,
    /// Numeric multipliers; shorter than `d_values` when a solve failed.
    pub c_values: Vec<f64>,
    /// Leading-order values, sign-matched to the numeric curve.
    pub c_leading: Vec<f64>,
    pub complete: bool,
}

impl ReducedCurve {
    /// Both curves divided by their own value at the sample `k`.
    pub fn normalized_at(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = (self.c_values[k], self.c_leading[k]);
        (
            self.c_values.iter().map(|c| c / a).collect(),
            self.c_leading.iter().map(|c| c / b).collect(),
        )
    }

    /// Linear interpolation of the numeric zero crossings.
    pub fn crossings(&self) -> Vec<f64> {
        let n = self.c_values.len();
        let mut out = Vec::new();
        for k in 1..n {
            let (c0, c1) = (self.c_values[k - 1], self.c_values[k]);
            if c0 == 0.0 {
                out.push(self.d_values[k - 1]);
            } else if c0.signum() != c1.signum() && c1 != 0.0 {
                let (d0, d1) = (self.d_values[k - 1], self.d_values[k]);
                out.push(d0 - c0 * (d1 - d0) / (c1 - c0));
            }
        }
        if n > 0 && self.c_values[n - 1] == 0.0 {
            out.push(self.d_values[n - 1]);
        }
        out
    }
}

/// Solves the projected problem at every `d` on one fixed square grid of half-width
/// `2 max(d)` and spacing `h`. A failed solve truncates the curve and marks it incomplete.
pub fn numeric_c_curve(
    params: &ModelParams,
    d_list: &[f64],
    h: f64,
    profile: &VortexProfile,
    opts: &SolveOptions,
) -> Result<ReducedCurve> {
    if d_list.is_empty() || d_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("d values must be strictly increasing".into()));
    }
    let d_max = *d_list.last().unwrap();
    let spec = GridSpec::square(2.0 * d_max, h, params.regime.symmetry())?;
    let mut c_values = Vec::new();
    let mut complete = true;
    for &d in d_list {
        match solve_at(&params.with_d(d)?, spec, profile, opts) {
            Ok(r) => c_values.push(r.c_mult),
            Err(Error::NewtonDivergence { .. }) | Err(Error::KrylovStagnation(_)) => {
                complete = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let sign = if c_values.is_empty() {
        1.0
    } else {
        let k = sign_reference(params, d_list).min(c_values.len() - 1);
        if c_values[k].signum() == leading_c(d_list[k], params).signum() {
            1.0
        } else {
            -1.0
        }
    };
    Ok(ReducedCurve {
        regime: params.regime,
        d_values: d_list.to_vec(),
        c_leading: d_list.iter().map(|&d| sign * leading_c(d, params)).collect(),
        c_values,
        complete,
    })
}

/// Index of the sample closest to `predict_d / 2`.
fn sign_reference(params: &ModelParams, d_list: &[f64]) -> usize {
    let target = predict_d(params).map(|d| 0.5 * d).unwrap_or(d_list[0]);
    let mut best = 0;
    for (k, d) in d_list.iter().enumerate() {
        if (d - target).abs() < (d_list[best] - target).abs() {
            best = k;
        }
    }
    best
}
