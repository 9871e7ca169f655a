//! Sparse matrices, an LU preconditioner and restarted GMRES.

use crate::error::{Error, Result};
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

pub trait Preconditioner {
    fn solve_in_place(&self, x: &mut [f64]);
}

pub struct Identity;

impl Preconditioner for Identity {
    fn solve_in_place(&self, _x: &mut [f64]) {}
}

/// Square sparse matrix assembled from `(row, col, value)` triplets; duplicates add.
pub struct SparseMatrix {
    mat: SparseColMat<usize, f64>,
}

impl SparseMatrix {
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let t: Vec<Triplet<usize, usize, f64>> =
            triplets.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
        let mat = SparseColMat::try_new_from_triplets(n, n, &t)
            .map_err(|e| Error::LinearSolve(format!("assembly: {e:?}")))?;
        Ok(SparseMatrix { mat })
    }

    pub fn nnz(&self) -> usize {
        self.mat.compute_nnz()
    }

    fn pattern(&self) -> (Vec<usize>, Vec<usize>) {
        let s = self.mat.symbolic();
        (s.col_ptr().to_vec(), s.row_idx().to_vec())
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.mat.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        let m = self.mat.as_ref();
        let s = m.symbolic();
        let vals = m.val();
        for (c, xc) in x.iter().enumerate() {
            if *xc == 0.0 {
                continue;
            }
            for k in s.col_ptr()[c]..s.col_ptr()[c + 1] {
                y[s.row_idx()[k]] += vals[k] * xc;
            }
        }
    }
}

/// Sparse LU factors used as a (near exact) right preconditioner.
pub struct LuPreconditioner {
    lu: Lu<usize, f64>,
}

impl Preconditioner for LuPreconditioner {
    fn solve_in_place(&self, x: &mut [f64]) {
        let mut b = Mat::<f64>::from_fn(x.len(), 1, |i, _| x[i]);
        self.lu.solve_in_place(b.as_mut());
        for (i, v) in x.iter_mut().enumerate() {
            *v = b[(i, 0)];
        }
    }
}

/// Keeps the symbolic factorization alive across matrices with one sparsity pattern.
#[derive(Default)]
pub struct LuFactory {
    cached: Option<((Vec<usize>, Vec<usize>), SymbolicLu<usize>)>,
}

impl LuFactory {
    pub fn factor(&mut self, a: &SparseMatrix) -> Result<LuPreconditioner> {
        let pattern = a.pattern();
        let reuse = matches!(&self.cached, Some((p, _)) if *p == pattern);
        if !reuse {
            let sym = SymbolicLu::try_new(a.mat.symbolic())
                .map_err(|e| Error::LinearSolve(format!("symbolic LU: {e:?}")))?;
            self.cached = Some((pattern, sym));
        }
        let sym = self.cached.as_ref().unwrap().1.clone();
        let lu = Lu::try_new_with_symbolic(sym, a.mat.as_ref())
            .map_err(|e| Error::LinearSolve(format!("numeric LU: {e:?}")))?;
        Ok(LuPreconditioner { lu })
    }
}

/// Block elimination for a matrix bordered by one dense row and column (the last index):
/// only the leading block is factored, so the border adds no fill.
pub struct BorderedLu {
    lu: LuPreconditioner,
    /// `A^{-1} b` for the border column `b`.
    w: Vec<f64>,
    row: Vec<f64>,
    schur: f64,
}

impl Preconditioner for BorderedLu {
    fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.w.len();
        let s = x[n];
        self.lu.solve_in_place(&mut x[..n]);
        let y = (s - dot(&self.row, &x[..n])) / self.schur;
        for (xi, wi) in x[..n].iter_mut().zip(&self.w) {
            *xi -= wi * y;
        }
        x[n] = y;
    }
}

impl LuFactory {
    /// Factors the `dim x dim` bordered matrix given as triplets, the border being index
    /// `dim - 1`.
    pub fn factor_bordered(&mut self, dim: usize, triplets: &[(usize, usize, f64)]) -> Result<BorderedLu> {
        let n = dim - 1;
        let (mut col, mut row, mut corner) = (vec![0.0; n], vec![0.0; n], 0.0);
        let mut inner = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            match (r == n, c == n) {
                (false, false) => inner.push((r, c, v)),
                (false, true) => col[r] += v,
                (true, false) => row[c] += v,
                (true, true) => corner += v,
            }
        }
        let lu = self.factor(&SparseMatrix::from_triplets(n, &inner)?)?;
        let mut w = col;
        lu.solve_in_place(&mut w);
        let schur = corner - dot(&row, &w);
        if !(schur.abs() > 0.0) || !schur.is_finite() {
            return Err(Error::LinearSolve("singular border".into()));
        }
        Ok(BorderedLu { lu, w, row, schur })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    pub rel_tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            rel_tol: 1e-10,
            restart: 30,
            max_iter: 300,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GmresStats {
    pub iterations: usize,
    pub rel_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned restarted GMRES for `A x = b`, starting from `x`.
pub fn gmres<A: LinearOperator, P: Preconditioner>(
    a: &A,
    m: &P,
    b: &[f64],
    x: &mut [f64],
    opts: GmresOptions,
) -> Result<GmresStats> {
    let n = a.dim();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(GmresStats {
            iterations: 0,
            rel_residual: 0.0,
        });
    }
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut total = 0;
    loop {
        a.apply(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let beta = norm(&r);
        let mut rel = beta / bnorm;
        if rel <= opts.rel_tol {
            return Ok(GmresStats {
                iterations: total,
                rel_residual: rel,
            });
        }
        if total >= opts.max_iter {
            return Err(Error::KrylovStagnation(rel));
        }
        let k_max = opts.restart.min(opts.max_iter - total).max(1);
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|t| t / beta).collect()];
        let mut hmat = vec![vec![0.0; k_max]; k_max + 1];
        let (mut cs, mut sn) = (vec![0.0; k_max], vec![0.0; k_max]);
        let mut g = vec![0.0; k_max + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..k_max {
            z.copy_from_slice(&v[k]);
            m.solve_in_place(&mut z);
            a.apply(&z, &mut w);
            for (jj, vj) in v.iter().enumerate() {
                let hij = dot(&w, vj);
                hmat[jj][k] = hij;
                for (wi, vi) in w.iter_mut().zip(vj) {
                    *wi -= hij * vi;
                }
            }
            let hk = norm(&w);
            hmat[k + 1][k] = hk;
            for jj in 0..k {
                let t = cs[jj] * hmat[jj][k] + sn[jj] * hmat[jj + 1][k];
                hmat[jj + 1][k] = -sn[jj] * hmat[jj][k] + cs[jj] * hmat[jj + 1][k];
                hmat[jj][k] = t;
            }
            let den = hmat[k][k].hypot(hmat[k + 1][k]);
            cs[k] = hmat[k][k] / den;
            sn[k] = hmat[k + 1][k] / den;
            hmat[k][k] = den;
            hmat[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            total += 1;
            k_used = k + 1;
            rel = g[k + 1].abs() / bnorm;
            if rel <= opts.rel_tol || hk == 0.0 {
                break;
            }
            v.push(w.iter().map(|t| t / hk).collect());
        }
        // back substitution for the Krylov coefficients
        let mut y = vec![0.0; k_used];
        for ii in (0..k_used).rev() {
            let mut s = g[ii];
            for jj in ii + 1..k_used {
                s -= hmat[ii][jj] * y[jj];
            }
            y[ii] = s / hmat[ii][ii];
        }
        z.iter_mut().for_each(|t| *t = 0.0);
        for (yi, vi) in y.iter().zip(&v) {
            for (zt, vt) in z.iter_mut().zip(vi) {
                *zt += yi * vt;
            }
        }
        m.solve_in_place(&mut z);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
    }
}

/// Direct sparse solve refined by preconditioned GMRES.
pub fn solve_sparse(a: &SparseMatrix, b: &[f64], opts: GmresOptions) -> Result<(Vec<f64>, GmresStats)> {
    let pre = LuFactory::default().factor(a)?;
    let mut x = vec![0.0; b.len()];
    let stats = gmres(a, &pre, b, &mut x, opts)?;
    Ok((x, stats))
}
