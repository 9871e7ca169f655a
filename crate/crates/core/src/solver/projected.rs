//! Damped Newton on the bordered projected problem, and the force-balance root search.

use super::jacobian::{jacobian, residual, Constraint, Layout};
use super::linear::{gmres, GmresOptions, LuFactory, SparseMatrix};
use super::operators::OpTag;
use crate::ansatz::{build_ansatz, kernel_zd, ModelParams};
use crate::diagnostics::corrector_norms;
use crate::error::{Error, Result};
use crate::fields::{ComplexField, GridSpec};
use crate::profile::VortexProfile;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub newton_max: usize,
    pub newton_tol: f64,
    pub krylov_tol: f64,
    pub max_halvings: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            newton_max: 50,
            newton_tol: 1e-8,
            krylov_tol: 1e-10,
            max_halvings: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub u: ComplexField,
    pub c_mult: f64,
    pub newton_iters: usize,
    /// Quadrature L2 norm of the bordered residual at `u`.
    pub final_residual: f64,
    pub corrector_norm_star: f64,
    pub d_used: f64,
    /// Residual before each Newton step, ending with `final_residual`.
    pub residual_history: Vec<f64>,
    pub krylov_iters: usize,
}

/// Solves `S_tag[u] = c Z` with `Re <u - V, Z>_W = 0`, starting from `u = V` and keeping
/// `u = V` on the outer layer.
pub fn solve_projected(
    params: &ModelParams,
    v: &ComplexField,
    z: &ComplexField,
    tag: OpTag,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let spec = v.spec;
    tag.check_grid(&spec)?;
    if z.spec != spec {
        return Err(Error::InvalidArgument("Z_d lives on another grid".into()));
    }
    if tag.coefs(params).ring != params.regime.is_ring() {
        return Err(Error::RegimeMismatch {
            tag: tag.name(),
            symmetry: params.regime.symmetry().name(),
        });
    }
    if !v.all_finite() || !z.all_finite() {
        return Err(Error::NonFinite("solver input"));
    }
    let k = tag.coefs(params);
    let con = Constraint::new(v, z);
    let lay = Layout::new(spec);
    let mut u = v.clone();
    let mut c = projected_multiplier(&super::operators::apply_coefs(v, &k), v, z);
    let (mut r, mut rn) = residual(&u, c, v, z, &k, &con);
    let mut history = vec![rn];
    let mut factory = LuFactory::default();
    let gopts = GmresOptions {
        rel_tol: opts.krylov_tol,
        ..Default::default()
    };
    let mut iters = 0;
    let mut krylov = 0;
    while rn > opts.newton_tol {
        if iters >= opts.newton_max || !rn.is_finite() {
            return Err(Error::NewtonDivergence {
                iters,
                residual: rn,
            });
        }
        let trips = jacobian(&u, z, &k, &con);
        let jm = SparseMatrix::from_triplets(lay.dim(), &trips)?;
        let pre = factory.factor_bordered(lay.dim(), &trips)?;
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let mut step = vec![0.0; lay.dim()];
        krylov += gmres(&jm, &pre, &rhs, &mut step, gopts)?.iterations;
        // the axis rows pin Im u = 0 exactly, so drop round-off there
        for i in 0..lay.m1 {
            step[2 * lay.point(i, 0) + 1] = 0.0;
        }
        let mut lambda = 1.0;
        let mut accepted = None;
        for h in 0..=opts.max_halvings {
            let (tu, tc) = trial(&u, c, &step, lambda, &lay);
            let (tr, trn) = residual(&tu, tc, v, z, &k, &con);
            if trn < rn || h == opts.max_halvings {
                accepted = Some((tu, tc, tr, trn));
                break;
            }
            lambda *= 0.5;
        }
        let (tu, tc, tr, trn) = accepted.expect("line search always returns");
        u = tu;
        c = tc;
        r = tr;
        rn = trn;
        history.push(rn);
        iters += 1;
    }
    let norms = corrector_norms(&u, v, params)?;
    Ok(SolveResult {
        u,
        c_mult: c,
        newton_iters: iters,
        final_residual: rn,
        corrector_norm_star: norms.star,
        d_used: params.d,
        residual_history: history,
        krylov_iters: krylov,
    })
}

fn trial(u: &ComplexField, c: f64, step: &[f64], lambda: f64, lay: &Layout) -> (ComplexField, f64) {
    let mut out = u.clone();
    let spec = u.spec;
    for i in 0..lay.m1 {
        for j in 0..lay.m2 {
            let p = lay.point(i, j);
            out.data[spec.idx(i, j)] += Complex64::new(step[2 * p], step[2 * p + 1]) * lambda;
        }
    }
    (out, c + lambda * step[lay.c_index()])
}

/// `<S, Z>_W / <Z, Z>_W` with the weight `(1 + |V|^2)^{-2}` over the solved points.
pub fn projected_multiplier(s: &ComplexField, v: &ComplexField, z: &ComplexField) -> f64 {
    let spec = v.spec;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..spec.n1 - 1 {
        for j in 0..spec.n2 - 1 {
            let k = spec.idx(i, j);
            let vv = v.data[k].norm_sqr();
            let w = spec.trap_weight(i, j) / ((1.0 + vv) * (1.0 + vv));
            num += w * (s.data[k] * z.data[k].conj()).re;
            den += w * z.data[k].norm_sqr();
        }
    }
    num / den
}

/// Builds `V_d` and `Z_d` for `params` on `spec` and runs [`solve_projected`] with the
/// regime's operator.
pub fn solve_at(
    params: &ModelParams,
    spec: GridSpec,
    profile: &VortexProfile,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let v = build_ansatz(params, spec, profile)?;
    let z = kernel_zd(params, spec, profile, &v)?;
    solve_projected(params, &v, &z, params.regime.tag(), opts)
}

#[derive(Clone, Debug)]
pub struct Balanced {
    pub result: SolveResult,
    pub d_star: f64,
    /// Every `(d, c_mult)` evaluated, in order.
    pub samples: Vec<(f64, f64)>,
}

/// Root of `d -> c_mult(d)` in `[d_lo, d_hi]` by bracketed secant steps, on a fixed
/// square grid of half-width `2 d_hi` and spacing `h`.
pub fn solve_balanced(
    params: &ModelParams,
    d_bracket: (f64, f64),
    h: f64,
    profile: &VortexProfile,
    opts: &SolveOptions,
) -> Result<Balanced> {
    let (mut a, mut b) = d_bracket;
    if !(a > 0.0 && b > a) {
        return Err(Error::InvalidArgument(format!("bad bracket [{a}, {b}]")));
    }
    let spec = GridSpec::square(2.0 * b, h, params.regime.symmetry())?;
    let mut samples = Vec::new();
    let eval = |d: f64, samples: &mut Vec<(f64, f64)>| -> Result<SolveResult> {
        let r = solve_at(&params.with_d(d)?, spec, profile, opts)?;
        samples.push((d, r.c_mult));
        Ok(r)
    };
    let ra = eval(a, &mut samples)?;
    let rb = eval(b, &mut samples)?;
    let (mut fa, mut fb) = (ra.c_mult, rb.c_mult);
    if fa.signum() == fb.signum() && fa != 0.0 && fb != 0.0 {
        return Err(Error::NoSignChange {
            d_lo: a,
            d_hi: b,
            c_lo: fa,
            c_hi: fb,
        });
    }
    let scale = fa.abs().max(fb.abs());
    let tol = 1e-10 * scale;
    let mut best = if fa.abs() < fb.abs() { (a, ra) } else { (b, rb) };
    if best.1.c_mult.abs() <= tol {
        return Ok(Balanced {
            d_star: best.0,
            result: best.1,
            samples,
        });
    }
    // Illinois variant of regula falsi: a retained end has its value halved
    let mut side = 0i8;
    for _ in 0..100 {
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let rx = eval(x, &mut samples)?;
        let fx = rx.c_mult;
        if fx.abs() < best.1.c_mult.abs() {
            best = (x, rx);
        }
        if fx.abs() <= tol || (b - a) <= 4.0 * f64::EPSILON * b {
            break;
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    Ok(Balanced {
        d_star: best.0,
        result: best.1,
        samples,
    })
}
