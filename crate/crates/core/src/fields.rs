//! Quarter-domain grids, field storage, parity reflection, stencils and norms.
//!
//! A grid covers `[0, l1] x [0, l2]` with `n1 x n2` points, `x1 = i h1`, `x2 = j h2`,
//! so `l = (n - 1) h`. The last row and column carry Dirichlet data. The full plane is
//! recovered from the parity table
//!
//! ```text
//! u(-x1, x2) = u(x1, x2)        u(x1, -x2) = conj(u(x1, x2))
//! ```
//!
//! Real fields stored in a [`ScalarField`] are phases, so they follow the same table
//! with conjugation replaced by a sign flip.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Pair,
    Ring,
}

impl Symmetry {
    pub fn code(self) -> u32 {
        match self {
            Symmetry::Pair => 0,
            Symmetry::Ring => 1,
        }
    }

    pub fn from_code(c: u32) -> Result<Self> {
        match c {
            0 => Ok(Symmetry::Pair),
            1 => Ok(Symmetry::Ring),
            _ => Err(Error::Format(format!("unknown symmetry code {c}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Pair => "PAIR",
            Symmetry::Ring => "RING",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub l1: f64,
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
    pub n1: usize,
    pub n2: usize,
    pub symmetry: Symmetry,
}

impl GridSpec {
    /// Grid with spacings `h1, h2` covering at least `[0, l1] x [0, l2]`; the extents
    /// are rounded up to whole cells.
    pub fn new(l1: f64, l2: f64, h1: f64, h2: f64, symmetry: Symmetry) -> Result<Self> {
        if !(h1 > 0.0 && h1 <= 0.5 && h2 > 0.0 && h2 <= 0.5) {
            return Err(Error::InvalidArgument(format!("spacings ({h1}, {h2}) outside (0, 0.5]")));
        }
        if !(l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite()) {
            return Err(Error::InvalidArgument(format!("extents ({l1}, {l2})")));
        }
        let c1 = (l1 / h1 - 1e-9).ceil() as usize;
        let c2 = (l2 / h2 - 1e-9).ceil() as usize;
        Self::from_counts(c1 + 1, c2 + 1, h1, h2, symmetry)
    }

    pub fn from_counts(n1: usize, n2: usize, h1: f64, h2: f64, symmetry: Symmetry) -> Result<Self> {
        if n1 < 4 || n2 < 4 {
            return Err(Error::InvalidArgument(format!("grid {n1} x {n2} smaller than 4 x 4")));
        }
        if !(h1 > 0.0 && h1 <= 0.5 && h2 > 0.0 && h2 <= 0.5) {
            return Err(Error::InvalidArgument(format!("spacings ({h1}, {h2}) outside (0, 0.5]")));
        }
        n1.checked_mul(n2)
            .filter(|n| *n <= 1 << 32)
            .ok_or_else(|| Error::InvalidArgument("grid too large".into()))?;
        Ok(GridSpec {
            l1: (n1 - 1) as f64 * h1,
            l2: (n2 - 1) as f64 * h2,
            h1,
            h2,
            n1,
            n2,
            symmetry,
        })
    }

    /// Square grid `[0, l] x [0, l]` with spacing `h`.
    pub fn square(l: f64, h: f64, symmetry: Symmetry) -> Result<Self> {
        Self::new(l, l, h, h, symmetry)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    #[inline]
    pub fn x1(&self, i: usize) -> f64 {
        i as f64 * self.h1
    }

    #[inline]
    pub fn x2(&self, j: usize) -> f64 {
        j as f64 * self.h2
    }

    /// Points where stencils are evaluated (everything but the outer layer).
    #[inline]
    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i + 1 < self.n1 && j + 1 < self.n2
    }

    /// Trapezoidal quadrature weight of a stored point (cell area included).
    pub fn trap_weight(&self, i: usize, j: usize) -> f64 {
        let w1 = if i == 0 || i + 1 == self.n1 { 0.5 } else { 1.0 };
        let w2 = if j == 0 || j + 1 == self.n2 { 0.5 } else { 1.0 };
        w1 * w2 * self.h1 * self.h2
    }
}

/// Sample types that can live on a quarter grid.
pub trait Sample:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + PartialEq + Send + Sync
{
    fn zero() -> Self;
    /// Value at `(x1, -x2)` given the value at `(x1, x2)`.
    fn mirror_x2(self) -> Self;
    fn magnitude(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Sample for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn mirror_x2(self) -> Self {
        self.conj()
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }
    fn mirror_x2(self) -> Self {
        -self
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    pub spec: GridSpec,
    pub data: Vec<T>,
}

pub type ComplexField = Field<Complex64>;
pub type ScalarField = Field<f64>;

impl<T: Sample> Field<T> {
    pub fn zeros(spec: GridSpec) -> Self {
        Field {
            spec,
            data: vec![T::zero(); spec.len()],
        }
    }

    pub fn from_fn<F: FnMut(f64, f64) -> T>(spec: GridSpec, mut f: F) -> Self {
        let mut data = Vec::with_capacity(spec.len());
        for i in 0..spec.n1 {
            for j in 0..spec.n2 {
                data.push(f(spec.x1(i), spec.x2(j)));
            }
        }
        Field { spec, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.data[self.spec.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.spec.idx(i, j);
        self.data[k] = v;
    }

    /// Lattice value with ghost indices `-n < i, j < 0` resolved by parity.
    #[inline]
    pub fn ghost(&self, i: isize, j: isize) -> T {
        let v = self.at(i.unsigned_abs(), j.unsigned_abs());
        if j < 0 {
            v.mirror_x2()
        } else {
            v
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn sup(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.magnitude()))
    }

    pub fn map<U: Sample, F: Fn(T) -> U>(&self, f: F) -> Field<U> {
        Field {
            spec: self.spec,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.map(|v| v * a)
    }

    /// Value at an arbitrary point of the full plane, bilinear between lattice points.
    pub fn reflect_full(&self, x1: f64, x2: f64) -> Result<T> {
        let s = &self.spec;
        if !(x1.abs() <= s.l1 && x2.abs() <= s.l2) {
            return Err(Error::OutOfDomain(x1, x2));
        }
        let (a1, a2) = (x1.abs() / s.h1, x2.abs() / s.h2);
        let i = (a1.floor() as usize).min(s.n1 - 2);
        let j = (a2.floor() as usize).min(s.n2 - 2);
        let (t1, t2) = (a1 - i as f64, a2 - j as f64);
        let v = if t1 == 0.0 && t2 == 0.0 {
            self.at(i, j)
        } else {
            self.at(i, j) * ((1.0 - t1) * (1.0 - t2))
                + self.at(i + 1, j) * (t1 * (1.0 - t2))
                + self.at(i, j + 1) * ((1.0 - t1) * t2)
                + self.at(i + 1, j + 1) * (t1 * t2)
        };
        Ok(if x2 < 0.0 { v.mirror_x2() } else { v })
    }

    /// Full-plane lattice array over `[-l1, l1] x [-l2, l2]`, row-major with
    /// `(2 n1 - 1) x (2 n2 - 1)` entries.
    pub fn expand_full(&self) -> (Vec<T>, usize, usize) {
        let (n1, n2) = (self.spec.n1 as isize, self.spec.n2 as isize);
        let (m1, m2) = (2 * n1 - 1, 2 * n2 - 1);
        let mut out = Vec::with_capacity((m1 * m2) as usize);
        for a in 0..m1 {
            for b in 0..m2 {
                out.push(self.ghost(a - (n1 - 1), b - (n2 - 1)));
            }
        }
        (out, m1 as usize, m2 as usize)
    }
}

/// Central differences `(d1, d2, laplacian)`; the outer layer of the outputs is zero.
pub fn diff_ops<T: Sample>(f: &Field<T>) -> (Field<T>, Field<T>, Field<T>) {
    let s = f.spec;
    let mut d1 = Field::zeros(s);
    let mut d2 = Field::zeros(s);
    let mut lap = Field::zeros(s);
    let (ih1, ih2) = (0.5 / s.h1, 0.5 / s.h2);
    let (q1, q2) = (1.0 / (s.h1 * s.h1), 1.0 / (s.h2 * s.h2));
    for i in 0..s.n1 - 1 {
        for j in 0..s.n2 - 1 {
            let (ii, jj) = (i as isize, j as isize);
            let c = f.at(i, j);
            let e = f.ghost(ii + 1, jj);
            let w = f.ghost(ii - 1, jj);
            let n = f.ghost(ii, jj + 1);
            let so = f.ghost(ii, jj - 1);
            let k = s.idx(i, j);
            d1.data[k] = (e - w) * ih1;
            d2.data[k] = (n - so) * ih2;
            lap.data[k] = (e + w - c * 2.0) * q1 + (n + so - c * 2.0) * q2;
        }
    }
    (d1, d2, lap)
}

/// Distance weight `l^power`, `l` the distance to the nearest centre.
#[derive(Clone, Debug)]
pub struct Weight {
    pub centers: Vec<[f64; 2]>,
    pub power: f64,
}

impl Weight {
    pub fn nearest(&self, x1: f64, x2: f64) -> f64 {
        nearest_distance(&self.centers, x1, x2)
    }
}

pub fn nearest_distance(centers: &[[f64; 2]], x1: f64, x2: f64) -> f64 {
    centers
        .iter()
        .map(|c| ((x1 - c[0]).powi(2) + (x2 - c[1]).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Two,
    Fourteen,
    Inf,
}

impl Exponent {
    pub fn from_p(p: f64) -> Result<Self> {
        if p == 2.0 {
            Ok(Exponent::Two)
        } else if p == 14.0 {
            Ok(Exponent::Fourteen)
        } else if p == f64::INFINITY {
            Ok(Exponent::Inf)
        } else {
            Err(Error::InvalidArgument(format!("unsupported norm exponent {p}")))
        }
    }

    fn value(self) -> f64 {
        match self {
            Exponent::Two => 2.0,
            Exponent::Fourteen => 14.0,
            Exponent::Inf => f64::INFINITY,
        }
    }
}

pub type Region<'a> = &'a dyn Fn(f64, f64) -> bool;

/// Discrete `L^p` norm over the stored quarter (trapezoidal weights), optionally
/// weighted by `l^alpha` and restricted to a subregion.
pub fn discrete_norm<T: Sample>(
    f: &Field<T>,
    p: f64,
    weight: Option<&Weight>,
    region: Option<Region>,
) -> Result<f64> {
    let e = Exponent::from_p(p)?;
    Ok(norm_with(f.spec, |i, j| f.at(i, j).magnitude(), e, weight, region))
}

/// Same as [`discrete_norm`] for pointwise magnitudes supplied by a closure.
pub fn norm_with<F: Fn(usize, usize) -> f64>(
    s: GridSpec,
    g: F,
    e: Exponent,
    weight: Option<&Weight>,
    region: Option<Region>,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..s.n1 {
        for j in 0..s.n2 {
            let (x1, x2) = (s.x1(i), s.x2(j));
            if let Some(r) = region {
                if !r(x1, x2) {
                    continue;
                }
            }
            let mut v = g(i, j);
            if let Some(w) = weight {
                v *= w.nearest(x1, x2).powf(w.power);
            }
            match e {
                Exponent::Inf => acc = f64::max(acc, v),
                _ => acc += s.trap_weight(i, j) * v.powf(e.value()),
            }
        }
    }
    match e {
        Exponent::Inf => acc,
        _ => acc.powf(1.0 / e.value()),
    }
}

/// Grid surrogate of a `C^k` norm: sum over orders `0..=k` of the sup of the
/// divided differences of that order, over the points of `region`.
pub fn c_k_surrogate<T: Sample>(f: &Field<T>, order: usize, region: Region) -> f64 {
    let s = f.spec;
    let (ih1, ih2) = (0.5 / s.h1, 0.5 / s.h2);
    let (q1, q2) = (1.0 / (s.h1 * s.h1), 1.0 / (s.h2 * s.h2));
    let mut sups = [0.0f64; 3];
    for i in 0..s.n1 - 1 {
        for j in 0..s.n2 - 1 {
            if !region(s.x1(i), s.x2(j)) {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let c = f.at(i, j);
            sups[0] = sups[0].max(c.magnitude());
            if order >= 1 {
                let e = f.ghost(ii + 1, jj);
                let w = f.ghost(ii - 1, jj);
                let n = f.ghost(ii, jj + 1);
                let so = f.ghost(ii, jj - 1);
                let g1 = ((e - w) * ih1).magnitude();
                let g2 = ((n - so) * ih2).magnitude();
                sups[1] = sups[1].max(g1.hypot(g2));
                if order >= 2 {
                    let a = ((e + w - c * 2.0) * q1).magnitude();
                    let b = ((n + so - c * 2.0) * q2).magnitude();
                    let ne = f.ghost(ii + 1, jj + 1);
                    let nw = f.ghost(ii - 1, jj + 1);
                    let se = f.ghost(ii + 1, jj - 1);
                    let sw = f.ghost(ii - 1, jj - 1);
                    let x = ((ne - nw - se + sw) * (ih1 * ih2)).magnitude();
                    sups[2] = sups[2].max(a.max(b).max(x));
                }
            }
        }
    }
    sups.iter().take(order + 1).sum()
}

/// Tensor-product quintic B-spline through full-plane lattice data; `C^4`, so central
/// differences of its samples keep their second-order error even across knots.
#[derive(Clone, Debug)]
pub struct Spline2 {
    coef: Vec<Complex64>,
    m1: usize,
    m2: usize,
    x0: [f64; 2],
    h: [f64; 2],
}

/// Poles of the quintic B-spline interpolation filter.
const QUINTIC_POLES: [f64; 2] = [-0.430_575_347_099_973_8, -0.043_096_288_203_264_65];

/// Mirror index on `0..n`, reflecting about the end samples.
fn mirror(k: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let period = 2 * (n - 1);
    let k = k.rem_euclid(period);
    (if k < n { k } else { period - k }) as usize
}

/// Turns samples into quintic B-spline coefficients with mirror-symmetric ends, by the
/// causal and anticausal recursive filters of each pole.
fn bspline_prefilter(line: &mut [Complex64]) {
    let n = line.len();
    if n < 2 {
        return;
    }
    let gain: f64 = QUINTIC_POLES.iter().map(|z| (1.0 - z) * (1.0 - 1.0 / z)).product();
    line.iter_mut().for_each(|c| *c *= gain);
    for z in QUINTIC_POLES {
        // causal start: the mirrored sum truncated where z^k drops below rounding
        let horizon = (f64::EPSILON.ln() / z.abs().ln()).ceil() as isize;
        let mut zk = 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..horizon {
            sum += line[mirror(k, n)] * zk;
            zk *= z;
        }
        line[0] = sum;
        for k in 1..n {
            let prev = line[k - 1];
            line[k] += prev * z;
        }
        line[n - 1] = (line[n - 1] + line[n - 2] * z) * (z / (z * z - 1.0));
        for k in (0..n - 1).rev() {
            let next = line[k + 1];
            line[k] = (next - line[k]) * z;
        }
    }
}

impl Spline2 {
    /// `data` row-major `m1 x m2`, lattice `x0 + (a h1, b h2)`.
    pub fn new(data: Vec<Complex64>, m1: usize, m2: usize, x0: [f64; 2], h: [f64; 2]) -> Self {
        let mut coef = data;
        for a in 0..m1 {
            bspline_prefilter(&mut coef[a * m2..(a + 1) * m2]);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); m1];
        for b in 0..m2 {
            for a in 0..m1 {
                col[a] = coef[a * m2 + b];
            }
            bspline_prefilter(&mut col);
            for a in 0..m1 {
                coef[a * m2 + b] = col[a];
            }
        }
        Spline2 { coef, m1, m2, x0, h }
    }

    /// Spline over the parity extension of a quarter-grid field.
    pub fn from_field(f: &ComplexField) -> Self {
        let (data, m1, m2) = f.expand_full();
        let s = f.spec;
        Spline2::new(data, m1, m2, [-s.l1, -s.l2], [s.h1, s.h2])
    }

    /// Value at `(x1, x2)`; `None` outside the lattice hull.
    pub fn eval(&self, x1: f64, x2: f64) -> Option<Complex64> {
        let u = (x1 - self.x0[0]) / self.h[0];
        let v = (x2 - self.x0[1]) / self.h[1];
        if !(u >= 0.0 && v >= 0.0 && u <= (self.m1 - 1) as f64 && v <= (self.m2 - 1) as f64) {
            return None;
        }
        let a = u.floor() as isize;
        let b = v.floor() as isize;
        let wa = bspline_weights(u - a as f64);
        let wb = bspline_weights(v - b as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, wp) in wa.iter().enumerate() {
            let row = mirror(a + p as isize - 2, self.m1) * self.m2;
            let mut sum = Complex64::new(0.0, 0.0);
            for (q, wq) in wb.iter().enumerate() {
                sum += self.coef[row + mirror(b + q as isize - 2, self.m2)] * *wq;
            }
            acc += sum * *wp;
        }
        Some(acc)
    }
}

/// Centred quintic B-spline.
fn beta5(x: f64) -> f64 {
    let x = x.abs();
    let x2 = x * x;
    if x <= 1.0 {
        (66.0 - 60.0 * x2 + 30.0 * x2 * x2 - 10.0 * x2 * x2 * x) / 120.0
    } else if x <= 2.0 {
        (51.0 + 75.0 * x - 210.0 * x2 + 150.0 * x2 * x - 45.0 * x2 * x2 + 5.0 * x2 * x2 * x) / 120.0
    } else if x < 3.0 {
        (3.0 - x).powi(5) / 120.0
    } else {
        0.0
    }
}

/// Weights of the six coefficients at offsets `-2..=3` from the cell start, for the
/// fractional position `t` in `[0, 1]`.
fn bspline_weights(t: f64) -> [f64; 6] {
    std::array::from_fn(|k| beta5(t - (k as f64 - 2.0)))
}
