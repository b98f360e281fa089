//! Lowest eigenpairs of sparse Hermitian matrices.
//!
//! Small matrices go straight to a dense Hermitian eigendecomposition. Larger
//! ones use Chebyshev-filtered subspace iteration: a scaled Chebyshev
//! polynomial damps the unwanted upper part of the spectrum, followed by
//! orthonormalization and a Rayleigh-Ritz step.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sprs::CsMat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("eigensolver did not converge in {iterations} iterations (worst residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid eigenvalue request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Absolute residual bound `‖Hx − λx‖` per eigenpair.
    pub tol: f64,
    /// Outer iterations (filter + Rayleigh-Ritz) before giving up.
    pub max_iter: usize,
    /// Chebyshev polynomial degree per outer iteration.
    pub degree: usize,
    pub seed: u64,
    /// Dimension at or below which the dense solver is used.
    pub dense_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000, degree: 30, seed: 0x5eed, dense_threshold: 600 }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: DMatrix<Complex64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

pub fn lowest_eigenvalues(h: &CsMat<Complex64>, k: usize, tol: f64) -> Result<EigenResult, SolverError> {
    lowest_eigenvalues_with(h, k, &SolverOptions { tol, ..SolverOptions::default() })
}

pub fn lowest_eigenvalues_with(
    h: &CsMat<Complex64>,
    k: usize,
    options: &SolverOptions,
) -> Result<EigenResult, SolverError> {
    let n = h.rows();
    if h.cols() != n {
        return Err(SolverError::InvalidRequest(format!("matrix is {}×{}", n, h.cols())));
    }
    if k == 0 || k > n {
        return Err(SolverError::InvalidRequest(format!("k = {k} for dimension {n}")));
    }
    if !(options.tol > 0.0) {
        return Err(SolverError::InvalidRequest(format!("tol = {}", options.tol)));
    }
    let h = if h.is_csr() { h.clone() } else { h.to_csr() };
    let block = (k + k.max(10)).min(n);
    if n <= options.dense_threshold || 2 * block >= n {
        dense(&h, k, options.tol)
    } else {
        chebyshev(&h, k, block, options)
    }
}

fn to_dense(h: &CsMat<Complex64>) -> DMatrix<Complex64> {
    let n = h.rows();
    let mut d = DMatrix::zeros(n, n);
    for (row, vec) in h.outer_iterator().enumerate() {
        for (col, &v) in vec.iter() {
            d[(row, col)] += v;
        }
    }
    d
}

fn dense(h: &CsMat<Complex64>, k: usize, tol: f64) -> Result<EigenResult, SolverError> {
    let d = to_dense(h);
    let sym = (&d + d.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let order = &order[..k];
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(d.nrows(), k, |r, c| eig.eigenvectors[(r, order[c])]);
    let residuals = residuals(&(&d * &vectors), &vectors, &values);
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > tol {
        return Err(SolverError::NotConverged { iterations: 1, residual: worst });
    }
    Ok(EigenResult { values, vectors, residuals, iterations: 1 })
}

fn residuals(hx: &DMatrix<Complex64>, x: &DMatrix<Complex64>, values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .enumerate()
        .map(|(j, &l)| (hx.column(j) - x.column(j) * Complex64::new(l, 0.0)).norm())
        .collect()
}

/// `H X` for a column-major block `X`.
fn apply(h: &CsMat<Complex64>, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (n, p) = x.shape();
    // work row-major so each output row is written by one thread
    let xt = x.transpose();
    let xs = xt.as_slice();
    let mut out = vec![Complex64::default(); n * p];
    out.par_chunks_mut(p).enumerate().for_each(|(row, dst)| {
        if let Some(vec) = h.outer_view(row) {
            for (col, &v) in vec.iter() {
                let src = &xs[col * p..(col + 1) * p];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += v * s;
                }
            }
        }
    });
    DMatrix::from_row_slice(n, p, &out)
}

fn gershgorin_upper(h: &CsMat<Complex64>) -> f64 {
    h.outer_iterator()
        .enumerate()
        .map(|(row, vec)| {
            vec.iter().map(|(col, v)| if col == row { v.re } else { v.norm() }).sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn orthonormalize(x: DMatrix<Complex64>) -> DMatrix<Complex64> {
    x.qr().q()
}

struct Ritz {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
    h_vectors: DMatrix<Complex64>,
}

fn rayleigh_ritz(h: &CsMat<Complex64>, q: &DMatrix<Complex64>) -> Ritz {
    let hq = apply(h, q);
    let g = q.adjoint() * &hq;
    let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(g);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let p = order.len();
    let w = DMatrix::from_fn(p, p, |r, c| eig.eigenvectors[(r, order[c])]);
    Ritz {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: q * &w,
        h_vectors: hq * &w,
    }
}

/// Scaled Chebyshev filter damping `[a, b]` relative to the point `a0`.
fn filter(h: &CsMat<Complex64>, x: DMatrix<Complex64>, degree: usize, a: f64, b: f64, a0: f64) -> DMatrix<Complex64> {
    let e = (b - a) / 2.0;
    let c = (b + a) / 2.0;
    let mut sigma = e / (a0 - c);
    let tau = 2.0 / sigma;
    let shift = |y: &DMatrix<Complex64>| apply(h, y) - y * Complex64::new(c, 0.0);
    let mut y = shift(&x) * Complex64::new(sigma / e, 0.0);
    let mut prev = x;
    for _ in 1..degree {
        let sigma_next = 1.0 / (tau - sigma);
        let next = shift(&y) * Complex64::new(2.0 * sigma_next / e, 0.0)
            - &prev * Complex64::new(sigma * sigma_next, 0.0);
        prev = std::mem::replace(&mut y, next);
        sigma = sigma_next;
    }
    y
}

fn chebyshev(h: &CsMat<Complex64>, k: usize, p: usize, options: &SolverOptions) -> Result<EigenResult, SolverError> {
    let n = h.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let start = DMatrix::from_fn(n, p, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let upper = gershgorin_upper(h);
    let mut ritz = rayleigh_ritz(h, &orthonormalize(start));
    let mut worst = f64::INFINITY;
    for iteration in 1..=options.max_iter {
        let a0 = ritz.values[0];
        let a = ritz.values[p - 1];
        if !(a < upper) {
            // the subspace already spans the top of the spectrum: nothing left to damp
            break;
        }
        let filtered = filter(h, ritz.vectors, options.degree, a, upper, a0);
        ritz = rayleigh_ritz(h, &orthonormalize(filtered));
        let res = residuals(&ritz.h_vectors.columns(0, k).into(), &ritz.vectors.columns(0, k).into(), &ritz.values[..k]);
        worst = res.iter().copied().fold(0.0, f64::max);
        log::debug!("chfsi iteration {iteration}: worst residual {worst:.3e}");
        if worst <= options.tol {
            return Ok(EigenResult {
                values: ritz.values[..k].to_vec(),
                vectors: ritz.vectors.columns(0, k).into(),
                residuals: res,
                iterations: iteration,
            });
        }
    }
    Err(SolverError::NotConverged { iterations: options.max_iter, residual: worst })
}
