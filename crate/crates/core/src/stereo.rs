//! Stereographic chart of the unit sphere and the scalar nonlinearity.
//!
//! `project` sends `m` to `(m1 + i m2) / (1 + m3)`; `unproject` is its inverse
//! and lands exactly on the sphere up to rounding.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Points with `m3` at or below `-1 + SOUTH_POLE_TOL` have no chart value.
pub const SOUTH_POLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl SpherePoint {
    /// Checked constructor, rejects points off the unit sphere by more than 1e-12.
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        let p = SpherePoint { m1, m2, m3 };
        if !(m1.is_finite() && m2.is_finite() && m3.is_finite()) {
            return Err(Error::NonFinite("sphere point"));
        }
        if (p.norm_sq() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "|m|^2 = {} is not 1",
                p.norm_sq()
            )));
        }
        Ok(p)
    }

    pub fn norm_sq(&self) -> f64 {
        self.m1 * self.m1 + self.m2 * self.m2 + self.m3 * self.m3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }
}

pub fn project(m: SpherePoint) -> Result<Complex64> {
    if m.m3 <= -1.0 + SOUTH_POLE_TOL {
        return Err(Error::SouthPole(m.m3));
    }
    let w = Complex64::new(m.m1, m.m2);
    if m.m3 >= 0.0 || w.norm_sqr() == 0.0 {
        Ok(w / (1.0 + m.m3))
    } else {
        // (1 + m3)(1 - m3) = m1^2 + m2^2 avoids the cancellation in 1 + m3 near the pole
        Ok(w * ((1.0 - m.m3) / w.norm_sqr()))
    }
}

pub fn unproject(psi: Complex64) -> Result<SpherePoint> {
    if !(psi.re.is_finite() && psi.im.is_finite()) {
        return Err(Error::NonFinite("stereographic value"));
    }
    let s = psi.norm_sqr();
    let inv = 1.0 / (1.0 + s);
    let m1 = 2.0 * psi.re * inv;
    let m2 = 2.0 * psi.im * inv;
    let m3 = (1.0 - s) * inv;
    // one renormalization pass pulls |m| to within an ulp of 1
    let n = (m1 * m1 + m2 * m2 + m3 * m3).sqrt();
    Ok(SpherePoint {
        m1: m1 / n,
        m2: m2 / n,
        m3: m3 / n,
    })
}

/// `F(u) = (1 - |u|^2) / (1 + |u|^2) * u`.
#[inline]
pub fn nonlinearity_f(u: Complex64) -> Complex64 {
    let s = u.norm_sqr();
    u * ((1.0 - s) / (1.0 + s))
}
