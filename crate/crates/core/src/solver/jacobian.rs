//! Residual and analytic Jacobian of the bordered system.
//!
//! Unknowns are `(Re u, Im u)` at every point off the outer Dirichlet layer, followed by
//! the multiplier `c`. Equations are `S[u] - c Z = 0` pointwise, except that on the axis
//! `x2 = 0` the imaginary equation is replaced by `Im u = 0`, and the last row is the
//! orthogonality condition `Re sum w (1 + |V|^2)^{-2} (u - V) conj(Z) = 0`.

use super::operators::{point_value, stencil, Coefs, I};
use crate::fields::{ComplexField, GridSpec};
use num_complex::Complex64;

pub(crate) struct Layout {
    pub m1: usize,
    pub m2: usize,
}

impl Layout {
    pub fn new(spec: GridSpec) -> Self {
        Layout {
            m1: spec.n1 - 1,
            m2: spec.n2 - 1,
        }
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> usize {
        i * self.m2 + j
    }

    pub fn n_points(&self) -> usize {
        self.m1 * self.m2
    }

    pub fn c_index(&self) -> usize {
        2 * self.n_points()
    }

    pub fn dim(&self) -> usize {
        2 * self.n_points() + 1
    }
}

/// Orthogonality weights `w_trap (1 + |V|^2)^{-2}` scaled so that the constraint row of
/// `Z` itself has unit norm.
pub(crate) struct Constraint {
    pub weights: Vec<f64>,
    pub scale: f64,
}

impl Constraint {
    pub fn new(v: &ComplexField, z: &ComplexField) -> Self {
        let spec = v.spec;
        let lay = Layout::new(spec);
        let mut weights = vec![0.0; lay.n_points()];
        let mut zz = 0.0;
        for i in 0..lay.m1 {
            for j in 0..lay.m2 {
                let k = spec.idx(i, j);
                let vv = v.data[k].norm_sqr();
                let w = spec.trap_weight(i, j) / ((1.0 + vv) * (1.0 + vv));
                weights[lay.point(i, j)] = w;
                zz += w * z.data[k].norm_sqr();
            }
        }
        Constraint {
            weights,
            scale: 1.0 / zz.sqrt(),
        }
    }
}

/// Residual vector and its quadrature-weighted L2 norm.
pub(crate) fn residual(
    u: &ComplexField,
    c: f64,
    v: &ComplexField,
    z: &ComplexField,
    k: &Coefs,
    con: &Constraint,
) -> (Vec<f64>, f64) {
    let spec = u.spec;
    let lay = Layout::new(spec);
    let mut r = vec![0.0; lay.dim()];
    let mut acc = 0.0;
    let mut g = 0.0;
    for i in 0..lay.m1 {
        let x1 = spec.x1(i);
        for j in 0..lay.m2 {
            let kk = spec.idx(i, j);
            let st = stencil(u, i, j);
            let val = point_value(&st, &spec, x1, k) - z.data[kk] * c;
            let p = lay.point(i, j);
            r[2 * p] = val.re;
            r[2 * p + 1] = if j == 0 { u.data[kk].im } else { val.im };
            acc += spec.trap_weight(i, j) * (r[2 * p] * r[2 * p] + r[2 * p + 1] * r[2 * p + 1]);
            let dz = u.data[kk] - v.data[kk];
            g += con.weights[p] * (dz * z.data[kk].conj()).re;
        }
    }
    g *= con.scale;
    r[lay.c_index()] = g;
    (r, (acc + g * g).sqrt())
}

/// Triplets of the Jacobian at `u`. The emitted pattern depends only on the grid and on
/// the support of `Z`, so one symbolic factorization serves a whole Newton run.
pub(crate) fn jacobian(u: &ComplexField, z: &ComplexField, k: &Coefs, con: &Constraint) -> Vec<(usize, usize, f64)> {
    let spec = u.spec;
    let lay = Layout::new(spec);
    let (h1, h2) = (spec.h1, spec.h2);
    let (q1, q2) = (1.0 / (h1 * h1), 1.0 / (h2 * h2));
    let mut t = Vec::with_capacity(lay.n_points() * 22 + 4 * lay.n_points());
    let ci = lay.c_index();
    for i in 0..lay.m1 {
        let x1 = spec.x1(i);
        for j in 0..lay.m2 {
            let p = lay.point(i, j);
            let kk = spec.idx(i, j);
            let st = stencil(u, i, j);
            let cu = st.c;
            let d1 = (st.e - st.w) / (2.0 * h1);
            let d2 = (st.n - st.s) / (2.0 * h2);
            let sq = cu.norm_sqr();
            let den = 1.0 + sq;
            let g = cu.conj() * (2.0 / den);
            let pp = d1 * d1 + d2 * d2;
            let fs = (1.0 - sq) / den;
            let fp = -2.0 / (den * den);

            // pointwise dependence on u at the centre: A du + B conj(du)
            let mut a_c = Complex64::new(fs + sq * fp, 0.0) + pp * cu.conj() * cu.conj() * (2.0 / (den * den));
            let mut b_c = cu * cu * fp - pp * (2.0 / (den * den));
            if k.q != 0.0 {
                a_c += I * d2 * (k.q * fp) * cu.conj();
                b_c += I * d2 * (k.q * fp) * cu;
            }
            let k1 = -2.0 * g * d1;
            let mut k2 = -2.0 * g * d2;
            if k.q != 0.0 {
                k2 += I * (k.q * fs);
            }
            if k.t != 0.0 {
                k2 -= I * k.t;
            }
            let mut ce = k1 / (2.0 * h1) + q1;
            let mut cw = -k1 / (2.0 * h1) + q1;
            let cn = k2 / (2.0 * h2) + q2;
            let cs = -k2 / (2.0 * h2) + q2;
            let mut cc = Complex64::new(-2.0 * q1 - 2.0 * q2, 0.0);
            if k.ring {
                if i == 0 {
                    ce += 2.0 * q1;
                    cc -= 2.0 * q1;
                } else {
                    ce += 1.0 / (2.0 * h1 * x1);
                    cw -= 1.0 / (2.0 * h1 * x1);
                }
            }
            a_c += cc;

            let (rre, rim) = (2 * p, 2 * p + 1);
            let axis = j == 0;
            let mut put = |ti: isize, tj: isize, a: Complex64, b: Complex64| {
                let (mut a, mut b) = (a, b);
                let ti = ti.unsigned_abs();
                if tj < 0 {
                    std::mem::swap(&mut a, &mut b);
                }
                let tj = tj.unsigned_abs();
                if ti >= lay.m1 || tj >= lay.m2 {
                    return;
                }
                let q = lay.point(ti, tj);
                let (sp, sm) = (a + b, a - b);
                t.push((rre, 2 * q, sp.re));
                t.push((rre, 2 * q + 1, -sm.im));
                if !axis {
                    t.push((rim, 2 * q, sp.im));
                    t.push((rim, 2 * q + 1, sm.re));
                }
            };
            let zero = Complex64::new(0.0, 0.0);
            let (ii, jj) = (i as isize, j as isize);
            put(ii, jj, a_c, b_c);
            put(ii + 1, jj, ce, zero);
            put(ii - 1, jj, cw, zero);
            put(ii, jj + 1, cn, zero);
            put(ii, jj - 1, cs, zero);
            if axis {
                t.push((rim, rim, 1.0));
            }
            let zk = z.data[kk];
            if zk != zero {
                t.push((rre, ci, -zk.re));
                if !axis {
                    t.push((rim, ci, -zk.im));
                }
                let w = con.weights[p] * con.scale;
                t.push((ci, rre, w * zk.re));
                t.push((ci, rim, w * zk.im));
            }
        }
    }
    t
}
