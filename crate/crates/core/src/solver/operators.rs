//! The traveling-wave operators on the quarter grid.
//!
//! ```text
//! S0[u] = Δu - 2ū/(1+|u|²) ((∂1 u)² + (∂2 u)²) + F(u)
//! Q2[u] = i (1-|u|²)/(1+|u|²) ∂2 u      T2[u] = -i ∂2 u      H1[u] = ∂1 u / x1
//! S1 = S0 + ε Q2                 S2 = S1 + κε T2
//! S3 = S0 + ε|log ε| Q2 + H1     S4 = S3 + κε|log ε| T2
//! ```
//!
//! The gradient product is the bilinear square, not `|∇u|²`. On the axis `x1 = 0`,
//! `H1` takes its limit `∂1² u`.

use crate::ansatz::ModelParams;
use crate::error::{Error, Result};
use crate::fields::{ComplexField, Field, GridSpec, Symmetry};
use crate::stereo::nonlinearity_f;
use num_complex::Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpTag {
    S0,
    S1,
    S2,
    S3,
    S4,
}

impl OpTag {
    pub fn name(self) -> &'static str {
        match self {
            OpTag::S0 => "S0",
            OpTag::S1 => "S1",
            OpTag::S2 => "S2",
            OpTag::S3 => "S3",
            OpTag::S4 => "S4",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "S0" => Ok(OpTag::S0),
            "S1" => Ok(OpTag::S1),
            "S2" => Ok(OpTag::S2),
            "S3" => Ok(OpTag::S3),
            "S4" => Ok(OpTag::S4),
            other => Err(Error::InvalidArgument(format!("unknown operator tag {other:?}"))),
        }
    }

    /// Coefficients of `Q2`, `T2` and whether `H1` is present.
    pub fn coefs(self, params: &ModelParams) -> Coefs {
        let (e, k) = (params.eps, params.kappa);
        let el = e * e.ln().abs();
        match self {
            OpTag::S0 => Coefs { q: 0.0, t: 0.0, ring: false },
            OpTag::S1 => Coefs { q: e, t: 0.0, ring: false },
            OpTag::S2 => Coefs { q: e, t: k * e, ring: false },
            OpTag::S3 => Coefs { q: el, t: 0.0, ring: true },
            OpTag::S4 => Coefs { q: el, t: k * el, ring: true },
        }
    }

    pub fn check_grid(self, spec: &GridSpec) -> Result<()> {
        let ok = match self {
            OpTag::S0 => true,
            OpTag::S1 | OpTag::S2 => spec.symmetry == Symmetry::Pair,
            OpTag::S3 | OpTag::S4 => spec.symmetry == Symmetry::Ring,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::RegimeMismatch {
                tag: self.name(),
                symmetry: spec.symmetry.name(),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefs {
    pub q: f64,
    pub t: f64,
    pub ring: bool,
}

/// Five-point neighbourhood with parity ghosts resolved.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stencil {
    pub c: Complex64,
    pub e: Complex64,
    pub w: Complex64,
    pub n: Complex64,
    pub s: Complex64,
}

#[inline]
pub(crate) fn stencil(u: &ComplexField, i: usize, j: usize) -> Stencil {
    let (ii, jj) = (i as isize, j as isize);
    Stencil {
        c: u.at(i, j),
        e: u.ghost(ii + 1, jj),
        w: u.ghost(ii - 1, jj),
        n: u.ghost(ii, jj + 1),
        s: u.ghost(ii, jj - 1),
    }
}

/// Pointwise operator value; `x1` is only read when `k.ring` is set.
#[inline]
pub(crate) fn point_value(st: &Stencil, spec: &GridSpec, x1: f64, k: &Coefs) -> Complex64 {
    let (h1, h2) = (spec.h1, spec.h2);
    let d1 = (st.e - st.w) / (2.0 * h1);
    let d2 = (st.n - st.s) / (2.0 * h2);
    let lap = (st.e + st.w - 2.0 * st.c) / (h1 * h1) + (st.n + st.s - 2.0 * st.c) / (h2 * h2);
    let sq = st.c.norm_sqr();
    let g = st.c.conj() * (2.0 / (1.0 + sq));
    let mut out = lap - g * (d1 * d1 + d2 * d2) + nonlinearity_f(st.c);
    if k.q != 0.0 {
        out += I * d2 * (k.q * (1.0 - sq) / (1.0 + sq));
    }
    if k.t != 0.0 {
        out -= I * d2 * k.t;
    }
    if k.ring {
        out += if x1 == 0.0 {
            2.0 * (st.e - st.c) / (h1 * h1)
        } else {
            d1 / x1
        };
    }
    out
}

pub fn apply_s(u: &ComplexField, tag: OpTag, params: &ModelParams) -> Result<ComplexField> {
    tag.check_grid(&u.spec)?;
    if !u.all_finite() {
        return Err(Error::NonFinite("field passed to the operator"));
    }
    Ok(apply_coefs(u, &tag.coefs(params)))
}

pub(crate) fn apply_coefs(u: &ComplexField, k: &Coefs) -> ComplexField {
    let spec = u.spec;
    let mut out = Field::zeros(spec);
    for i in 0..spec.n1 - 1 {
        let x1 = spec.x1(i);
        for j in 0..spec.n2 - 1 {
            let st = stencil(u, i, j);
            out.data[spec.idx(i, j)] = point_value(&st, &spec, x1, k);
        }
    }
    out
}

/// Individual first-order pieces, for inspection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Q2,
    T2,
    H1,
}

pub fn apply_component(u: &ComplexField, which: Component) -> ComplexField {
    let spec = u.spec;
    let mut out = Field::zeros(spec);
    for i in 0..spec.n1 - 1 {
        let x1 = spec.x1(i);
        for j in 0..spec.n2 - 1 {
            let st = stencil(u, i, j);
            let d2 = (st.n - st.s) / (2.0 * spec.h2);
            let sq = st.c.norm_sqr();
            out.data[spec.idx(i, j)] = match which {
                Component::Q2 => I * d2 * ((1.0 - sq) / (1.0 + sq)),
                Component::T2 => -I * d2,
                Component::H1 => {
                    if i == 0 {
                        2.0 * (st.e - st.c) / (spec.h1 * spec.h1)
                    } else {
                        (st.e - st.w) / (2.0 * spec.h1 * x1)
                    }
                }
            };
        }
    }
    out
}

/// Directional derivative `(S[u + δv] - S[u - δv]) / (2δ)`.
pub fn linearize_apply(u: &ComplexField, v: &ComplexField, tag: OpTag, params: &ModelParams) -> Result<ComplexField> {
    tag.check_grid(&u.spec)?;
    if v.spec != u.spec {
        return Err(Error::InvalidArgument("direction lives on another grid".into()));
    }
    let vn = v.sup();
    if vn == 0.0 {
        return Err(Error::InvalidArgument("zero direction".into()));
    }
    let delta = 1e-6 * u.sup().max(1.0) / vn.max(1e-12);
    let plus = Field {
        spec: u.spec,
        data: u.data.iter().zip(&v.data).map(|(a, b)| a + b * delta).collect(),
    };
    let minus = Field {
        spec: u.spec,
        data: u.data.iter().zip(&v.data).map(|(a, b)| a - b * delta).collect(),
    };
    let k = tag.coefs(params);
    let sp = apply_coefs(&plus, &k);
    let sm = apply_coefs(&minus, &k);
    Ok(Field {
        spec: u.spec,
        data: sp.data.iter().zip(&sm.data).map(|(a, b)| (a - b) / (2.0 * delta)).collect(),
    })
}
