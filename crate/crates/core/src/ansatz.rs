//! Model parameters and the approximate solutions built from two opposite vortices.
//!
//! The pair ansatz is `V_d = w+(z - e1) w-(z - e2)` with `e1 = (d, 0)`, `e2 = (-d, 0)` and
//! `w± = rho(l) e^{±i theta}`. For the ring the product carries an extra phase
//! `e^{i phi_d}` that absorbs the `(1/x1) d/dx1` term of the axisymmetric Laplacian.

use crate::error::{Error, Result};
use crate::fields::{ComplexField, Field, GridSpec, ScalarField, Symmetry};
use crate::profile::VortexProfile;
use crate::solver::linear::{solve_sparse, GmresOptions, SparseMatrix};
use crate::solver::operators::{apply_s, OpTag};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    PairWm,
    PairSch,
    RingWm,
    RingSch,
}

impl Regime {
    pub fn symmetry(self) -> Symmetry {
        match self {
            Regime::PairWm | Regime::PairSch => Symmetry::Pair,
            Regime::RingWm | Regime::RingSch => Symmetry::Ring,
        }
    }

    pub fn is_ring(self) -> bool {
        self.symmetry() == Symmetry::Ring
    }

    pub fn is_schrodinger(self) -> bool {
        matches!(self, Regime::PairSch | Regime::RingSch)
    }

    /// Operator whose zeros are the traveling solutions of this regime.
    pub fn tag(self) -> OpTag {
        match self {
            Regime::PairWm => OpTag::S1,
            Regime::PairSch => OpTag::S2,
            Regime::RingWm => OpTag::S3,
            Regime::RingSch => OpTag::S4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::PairWm => "PAIR_WM",
            Regime::PairSch => "PAIR_SCH",
            Regime::RingWm => "RING_WM",
            Regime::RingSch => "RING_SCH",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "PAIR_WM" => Ok(Regime::PairWm),
            "PAIR_SCH" => Ok(Regime::PairSch),
            "RING_WM" => Ok(Regime::RingWm),
            "RING_SCH" => Ok(Regime::RingSch),
            other => Err(Error::InvalidArgument(format!("unknown regime {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub regime: Regime,
    pub eps: f64,
    pub kappa: f64,
    pub c: f64,
    pub omega: f64,
    pub d_hat: f64,
    pub d: f64,
}

impl ModelParams {
    /// Derives `c`, `omega` and `d = d_hat / eps` and checks every admissibility condition.
    pub fn new(regime: Regime, eps: f64, kappa: f64, d_hat: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 0.2) {
            return Err(Error::InvalidArgument(format!("eps = {eps} outside (0, 0.2]")));
        }
        if !(kappa.is_finite() && 1.0 - 2.0 * kappa > 0.0) {
            return Err(Error::InvalidArgument(format!("kappa = {kappa} violates 1 - 2 kappa > 0")));
        }
        if !(d_hat >= 0.01 && d_hat <= 100.0) {
            return Err(Error::InvalidArgument(format!("d_hat = {d_hat} outside [0.01, 100]")));
        }
        let a = effective_eps(regime, eps);
        let c = a / (4.0 + a * a).sqrt();
        let omega = kappa * a * (1.0 - c * c).sqrt();
        Ok(ModelParams {
            regime,
            eps,
            kappa,
            c,
            omega,
            d_hat,
            d: d_hat / eps,
        })
    }

    /// Same model at another half-separation.
    pub fn with_d(&self, d: f64) -> Result<Self> {
        ModelParams::new(self.regime, self.eps, self.kappa, d * self.eps)
    }

    /// `eps` for the pair, `eps |log eps|` for the ring.
    pub fn eps_eff(&self) -> f64 {
        effective_eps(self.regime, self.eps)
    }

    pub fn centers(&self) -> Vec<[f64; 2]> {
        vec![[self.d, 0.0], [-self.d, 0.0]]
    }
}

fn effective_eps(regime: Regime, eps: f64) -> f64 {
    if regime.is_ring() {
        eps * eps.ln().abs()
    } else {
        eps
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geometry {
    pub ell: f64,
    pub theta: f64,
    pub grad_ell: [f64; 2],
    pub grad_theta: [f64; 2],
}

/// Polar data of `point` about `center`; the angle has its cut on the negative x1-ray.
pub fn vortex_geometry(center: [f64; 2], point: [f64; 2]) -> Result<Geometry> {
    let y = [point[0] - center[0], point[1] - center[1]];
    let ell = y[0].hypot(y[1]);
    if ell == 0.0 {
        return Err(Error::InvalidArgument("point coincides with the vortex centre".into()));
    }
    Ok(Geometry {
        ell,
        theta: y[1].atan2(y[0]),
        grad_ell: [y[0] / ell, y[1] / ell],
        grad_theta: [-y[1] / (ell * ell), y[0] / (ell * ell)],
    })
}

/// Degree-one vortex `rho(|y|) (y1 + i y2) / |y|`, conjugated for degree minus one.
#[inline]
pub fn vortex_value(profile: &VortexProfile, y1: f64, y2: f64, positive: bool) -> Complex64 {
    let ell = y1.hypot(y2);
    if ell == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let r = profile.eval(ell).0 / ell;
    Complex64::new(r * y1, if positive { r * y2 } else { -r * y2 })
}

/// Unchecked pair product on any grid, the vortex at `(d, 0)` carrying degree +1.
pub(crate) fn pair_product(d: f64, spec: GridSpec, profile: &VortexProfile) -> ComplexField {
    Field::from_fn(spec, |x1, x2| {
        vortex_value(profile, x1 - d, x2, true) * vortex_value(profile, x1 + d, x2, false)
    })
}

fn check_inside(d: f64, spec: &GridSpec) -> Result<()> {
    if !(d > 0.0 && d < spec.l1) {
        return Err(Error::VortexOutsideDomain(format!("d = {d}, l1 = {}", spec.l1)));
    }
    Ok(())
}

pub fn build_pair(params: &ModelParams, spec: GridSpec, profile: &VortexProfile) -> Result<ComplexField> {
    check_inside(params.d, &spec)?;
    Ok(pair_product(params.d, spec, profile))
}

/// Smooth cutoff `chi(r)`: 1 below `a`, 0 above `b`, every derivative continuous so that
/// fields built from it vary smoothly with `d` on a fixed lattice; returns `(chi, chi', chi'')`.
fn smooth_cutoff(r: f64, a: f64, b: f64) -> (f64, f64, f64) {
    if r <= a {
        return (1.0, 0.0, 0.0);
    }
    if r >= b {
        return (0.0, 0.0, 0.0);
    }
    let w = b - a;
    let t = (r - a) / w;
    // s = 1 / (1 + e^q) rises from 0 to 1 on (0, 1)
    let q = 1.0 / t - 1.0 / (1.0 - t);
    let dq = -1.0 / (t * t) - 1.0 / ((1.0 - t) * (1.0 - t));
    let ddq = 2.0 / (t * t * t) - 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t));
    let s = 1.0 / (1.0 + q.exp());
    let g = s * (1.0 - s);
    let ds = -g * dq;
    let dds = -(ds * (1.0 - 2.0 * s) * dq + g * ddq);
    (1.0 - s, -ds / w, -dds / (w * w))
}

/// Cubic smoothstep `eta(t)`: 1 on `[0, 1]`, 0 on `[2, inf)`.
pub fn eta_cutoff(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        1.0 - s * s * (3.0 - 2.0 * s)
    }
}

/// Radii `(a, 2a)` of the singular-phase cutoff: `a = d / 10`, floored at `min(2, d / 4)` so
/// the transition band spans several cells at moderate `d`.
pub fn phase_cutoff_radii(d: f64) -> (f64, f64) {
    let a = (0.1 * d).max(2.0f64.min(0.25 * d));
    (a, 2.0 * a)
}

/// Singular phase `phi_s = chi(|z - e1|) x2 log(l1^2 / l2^2) / (4d)`.
pub fn singular_phase(d: f64, x1: f64, x2: f64) -> f64 {
    if x2 == 0.0 {
        return 0.0;
    }
    let l1s = (x1 - d).powi(2) + x2 * x2;
    let l2s = (x1 + d).powi(2) + x2 * x2;
    let (a, b) = phase_cutoff_radii(d);
    let (chi, _, _) = smooth_cutoff(l1s.sqrt(), a, b);
    if chi == 0.0 {
        return 0.0;
    }
    chi * x2 * (l1s / l2s).ln() / (4.0 * d)
}

/// Model singular phase of one vortex, `y2 log|y|^2 / (4d)`.
pub fn singular_model(d: f64, y1: f64, y2: f64) -> f64 {
    y2 * (y1 * y1 + y2 * y2).ln() / (4.0 * d)
}

/// Closed form of `[Delta + (1/x1) d/dx1](theta_e1 - theta_e2 + phi_s)` away from the cores.
pub fn ring_phase_source(d: f64, x1: f64, x2: f64) -> f64 {
    let l1s = (x1 - d).powi(2) + x2 * x2;
    let l2s = (x1 + d).powi(2) + x2 * x2;
    // (1/x1) d/dx1 (theta1 - theta2); theta harmonic
    let mut out = if x1 == 0.0 {
        -4.0 * x2 * d / (l1s * l1s)
    } else {
        (-x2 / l1s + x2 / l2s) / x1
    };
    let r = l1s.sqrt();
    let (a, b) = phase_cutoff_radii(d);
    let (chi, dchi, ddchi) = smooth_cutoff(r, a, b);
    if chi == 0.0 && dchi == 0.0 {
        return out;
    }
    let big_l = (l1s / l2s).ln();
    let dl1 = 2.0 * (x1 - d) / l1s - 2.0 * (x1 + d) / l2s;
    let dl2 = 2.0 * x2 / l1s - 2.0 * x2 / l2s;
    let g = x2 * big_l / (4.0 * d);
    let g1 = x2 * dl1 / (4.0 * d);
    let g2 = (big_l + x2 * dl2) / (4.0 * d);
    let lap_g = x2 / d * (1.0 / l1s - 1.0 / l2s);
    let (c1, c2) = (dchi * (x1 - d) / r, dchi * x2 / r);
    let lap_chi = ddchi + dchi / r;
    out += chi * lap_g + 2.0 * (c1 * g1 + c2 * g2) + g * lap_chi;
    out += (chi * g1 + g * c1) / x1;
    out
}

/// Discrete `Delta + (1/x1) d/dx1` for a phase: even in x1, zero on the x2 = 0 row and on
/// the outer boundary. Unknowns are the points `i < n1 - 1`, `1 <= j < n2 - 1`.
fn solve_phase_problem(spec: GridSpec, source: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
    let (m1, m2) = (spec.n1 - 1, spec.n2 - 2);
    let id = |i: usize, j: usize| i * m2 + (j - 1);
    let (q1, q2) = (1.0 / (spec.h1 * spec.h1), 1.0 / (spec.h2 * spec.h2));
    let mut trip = Vec::with_capacity(5 * m1 * m2);
    let mut rhs = vec![0.0; m1 * m2];
    for i in 0..m1 {
        for j in 1..=m2 {
            let row = id(i, j);
            let x1 = spec.x1(i);
            let mut push = |ii: usize, jj: usize, v: f64| {
                if ii < m1 && jj >= 1 && jj <= m2 {
                    trip.push((row, id(ii, jj), v));
                }
            };
            push(i, j, -2.0 * q1 - 2.0 * q2);
            push(i, j + 1, q2);
            push(i, j - 1, q2);
            if i == 0 {
                // even ghost; (1/x1) d/dx1 tends to d^2/dx1^2
                push(1, j, 4.0 * q1);
                push(0, j, -2.0 * q1);
            } else {
                let hx = 0.5 / (spec.h1 * x1);
                push(i + 1, j, q1 + hx);
                push(i - 1, j, q1 - hx);
            }
            rhs[row] = -source(x1, spec.x2(j));
        }
    }
    let a = SparseMatrix::from_triplets(m1 * m2, &trip)?;
    let (x, _) = solve_sparse(&a, &rhs, GmresOptions::default())?;
    let mut out = Field::zeros(spec);
    for i in 0..m1 {
        for j in 1..=m2 {
            out.set(i, j, x[id(i, j)]);
        }
    }
    Ok(out)
}

/// Ring phase correction `(phi_s, phi_r)` for half-separation `params.d`.
pub fn build_ring_phase(params: &ModelParams, spec: GridSpec) -> Result<(ScalarField, ScalarField)> {
    if !params.regime.is_ring() || spec.symmetry != Symmetry::Ring {
        return Err(Error::InvalidArgument("ring phase needs a RING regime and grid".into()));
    }
    check_inside(params.d, &spec)?;
    ring_phase_at(params.d, spec)
}

fn ring_phase_at(d: f64, spec: GridSpec) -> Result<(ScalarField, ScalarField)> {
    let phi_s = Field::from_fn(spec, |x1, x2| singular_phase(d, x1, x2));
    let phi_r = solve_phase_problem(spec, |x1, x2| ring_phase_source(d, x1, x2))?;
    Ok((phi_s, phi_r))
}

pub fn build_ring(
    params: &ModelParams,
    spec: GridSpec,
    profile: &VortexProfile,
    phases: &(ScalarField, ScalarField),
) -> Result<ComplexField> {
    if !params.regime.is_ring() {
        return Err(Error::InvalidArgument("build_ring needs a RING regime".into()));
    }
    check_inside(params.d, &spec)?;
    if phases.0.spec != spec || phases.1.spec != spec {
        return Err(Error::InvalidArgument("phase fields live on another grid".into()));
    }
    Ok(ring_with_phase(params.d, spec, profile, phases))
}

fn ring_with_phase(
    d: f64,
    spec: GridSpec,
    profile: &VortexProfile,
    phases: &(ScalarField, ScalarField),
) -> ComplexField {
    let mut v = pair_product(d, spec, profile);
    for (k, z) in v.data.iter_mut().enumerate() {
        let phi = phases.0.data[k] + phases.1.data[k];
        if phi != 0.0 {
            *z *= Complex64::from_polar(1.0, phi);
        }
    }
    v
}

/// Ansatz of the regime at half-separation `d` (pair product, or ring with its phase).
pub fn build_ansatz(params: &ModelParams, spec: GridSpec, profile: &VortexProfile) -> Result<ComplexField> {
    if params.regime.symmetry() != spec.symmetry {
        return Err(Error::InvalidArgument(format!(
            "{} regime on a {} grid",
            params.regime.name(),
            spec.symmetry.name()
        )));
    }
    if params.regime.is_ring() {
        let ph = build_ring_phase(params, spec)?;
        build_ring(params, spec, profile, &ph)
    } else {
        build_pair(params, spec, profile)
    }
}

/// Cutoff radius of the co-kernel, in core widths.
pub const KERNEL_R: f64 = 6.0;

/// `Z_d = (dV_d/dd) [eta(l1/R) + eta(l2/R)]`, the derivative taken by a central difference
/// (for the ring, of the vortex product at fixed phase correction).
pub fn kernel_zd(
    params: &ModelParams,
    spec: GridSpec,
    profile: &VortexProfile,
    v_d: &ComplexField,
) -> Result<ComplexField> {
    if v_d.spec != spec {
        return Err(Error::InvalidArgument("V_d lives on another grid".into()));
    }
    let d = params.d;
    let delta = 1e-3 * d;
    check_inside(d + delta, &spec)?;
    // the ring phase correction is held at its value for `d`: its own d-derivative is
    // dominated by lattice aliasing of the cutoff band and carries no translation mode
    let (mut vp, mut vm) = (pair_product(d + delta, spec, profile), pair_product(d - delta, spec, profile));
    if params.regime.is_ring() {
        let ph = ring_phase_at(d, spec)?;
        for k in 0..spec.len() {
            let rot = Complex64::from_polar(1.0, ph.0.data[k] + ph.1.data[k]);
            vp.data[k] *= rot;
            vm.data[k] *= rot;
        }
    }
    let mut z = Field::zeros(spec);
    for i in 0..spec.n1 {
        for j in 0..spec.n2 {
            let (x1, x2) = (spec.x1(i), spec.x2(j));
            let cut = eta_cutoff((x1 - d).hypot(x2) / KERNEL_R) + eta_cutoff((x1 + d).hypot(x2) / KERNEL_R);
            if cut == 0.0 {
                continue;
            }
            let k = spec.idx(i, j);
            z.data[k] = (vp.data[k] - vm.data[k]) * (cut / (2.0 * delta));
        }
    }
    Ok(z)
}

/// Pieces of the weighted error norm.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorNorms {
    /// Sup (pair) or `L^14` (ring) of `S[V]` within distance 3 of a core.
    pub inner: f64,
    /// `sup l^{2 + rho} |Re E|` over `l > 2`.
    pub outer_re: f64,
    /// `sup l^{1 + rho} |Im E|` over `l > 2`.
    pub outer_im: f64,
    pub total: f64,
}

/// Decay exponent offset used in every weighted norm.
pub const VARRHO: f64 = 0.5;

/// Error field `E = -S[V] / (i V)` (or `S[V]` where `|V| < 0.1`) and its weighted norm.
pub fn error_field(v: &ComplexField, tag: OpTag, params: &ModelParams) -> Result<(ComplexField, ErrorNorms)> {
    let s = apply_s(v, tag, params)?;
    let spec = v.spec;
    let mut e = Field::zeros(spec);
    for k in 0..spec.len() {
        let vk = v.data[k];
        e.data[k] = if vk.norm() >= 0.1 {
            Complex64::new(0.0, 1.0) * s.data[k] / vk
        } else {
            s.data[k]
        };
    }
    let centers = params.centers();
    let mut inner_acc = 0.0f64;
    let (mut ore, mut oim) = (0.0f64, 0.0f64);
    let ring = spec.symmetry == Symmetry::Ring;
    for i in 0..spec.n1 - 1 {
        for j in 0..spec.n2 - 1 {
            let (x1, x2) = (spec.x1(i), spec.x2(j));
            let l = crate::fields::nearest_distance(&centers, x1, x2);
            let k = spec.idx(i, j);
            if l < 3.0 {
                let m = s.data[k].norm();
                if ring {
                    inner_acc += spec.trap_weight(i, j) * m.powi(14);
                } else {
                    inner_acc = inner_acc.max(m);
                }
            }
            if l > 2.0 {
                ore = ore.max(l.powf(2.0 + VARRHO) * e.data[k].re.abs());
                oim = oim.max(l.powf(1.0 + VARRHO) * e.data[k].im.abs());
            }
        }
    }
    // the stored quarter holds half of each ring core region
    let inner = if ring { (2.0 * inner_acc).powf(1.0 / 14.0) } else { inner_acc };
    Ok((
        e,
        ErrorNorms {
            inner,
            outer_re: ore,
            outer_im: oim,
            total: inner + ore + oim,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_relations() {
        let p = ModelParams::new(Regime::PairSch, 0.05, 0.25, 1.0).unwrap();
        assert!((2.0 * p.c / (1.0 - p.c * p.c).sqrt() - 0.05).abs() < 1e-15);
        assert!((p.omega / (1.0 - p.c * p.c).sqrt() - 0.25 * 0.05).abs() < 1e-15);
        assert_eq!(p.d, 20.0);
        let r = ModelParams::new(Regime::RingSch, 0.05, 0.25, 1.0).unwrap();
        let a = 0.05 * 0.05f64.ln().abs();
        assert!((2.0 * r.c / (1.0 - r.c * r.c).sqrt() - a).abs() < 1e-15);
        assert!((r.omega / (1.0 - r.c * r.c).sqrt() - 0.25 * a).abs() < 1e-15);
        assert!(ModelParams::new(Regime::PairWm, 0.3, 0.0, 1.0).is_err());
        assert!(ModelParams::new(Regime::PairWm, 0.05, 0.5, 1.0).is_err());
        assert!(ModelParams::new(Regime::PairWm, 0.05, 0.0, 200.0).is_err());
    }

    #[test]
    fn cutoffs() {
        assert_eq!(eta_cutoff(0.5), 1.0);
        assert_eq!(eta_cutoff(2.5), 0.0);
        assert!((eta_cutoff(1.5) - 0.5).abs() < 1e-15);
        let (a, b) = (1.0, 2.0);
        for r in [1.2, 1.5, 1.8] {
            let e = 1e-6;
            let fd = (smooth_cutoff(r + e, a, b).0 - smooth_cutoff(r - e, a, b).0) / (2.0 * e);
            let fdd = (smooth_cutoff(r + e, a, b).1 - smooth_cutoff(r - e, a, b).1) / (2.0 * e);
            assert!((fd - smooth_cutoff(r, a, b).1).abs() < 1e-8);
            assert!((fdd - smooth_cutoff(r, a, b).2).abs() < 1e-6);
        }
    }
}
