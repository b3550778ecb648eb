//! Truncated singular value decomposition.
//!
//! Small matrices go through an exact one-sided Jacobi decomposition; larger
//! ones use seeded randomized subspace iteration on the sparse matrix
//! followed by a Jacobi finish on the projected block. Both paths are
//! deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SparseMatrix};

/// Above this minimum dimension the randomized path is used.
const DENSE_CUTOFF: usize = 64;
/// Extra subspace columns carried during iteration.
const OVERSAMPLE: usize = 8;
/// Relative change in singular-value estimates that counts as converged.
const CONV_TOL: f64 = 1e-10;
const MAX_ITER: usize = 1000;

#[derive(Debug, Clone)]
pub struct Svd {
    /// m×k left singular vectors.
    pub u: DenseMatrix,
    /// k singular values, non-negative and non-increasing.
    pub singular_values: Vec<f64>,
    /// k×n right singular vectors.
    pub vt: DenseMatrix,
}

impl Svd {
    /// U · diag(σ) · Vᵀ
    pub fn reconstruct(&self) -> DenseMatrix {
        let k = self.singular_values.len();
        let mut us = self.u.clone();
        for r in 0..us.nrows() {
            let row = us.row_mut(r);
            for (j, s) in self.singular_values.iter().enumerate().take(k) {
                row[j] *= s;
            }
        }
        us.matmul(&self.vt)
    }

    fn truncate(mut self, k: usize) -> Svd {
        let m = self.u.nrows();
        let n = self.vt.ncols();
        let mut u = DenseMatrix::zeros(m, k);
        let mut vt = DenseMatrix::zeros(k, n);
        for r in 0..m {
            for c in 0..k {
                u.set(r, c, self.u.get(r, c));
            }
        }
        for r in 0..k {
            for c in 0..n {
                vt.set(r, c, self.vt.get(r, c));
            }
        }
        self.singular_values.truncate(k);
        Svd {
            u,
            singular_values: self.singular_values,
            vt,
        }
    }
}

/// Top-`k` singular triplets of `a`.
pub fn truncated_svd(a: &SparseMatrix, k: usize, seed: u64) -> Result<Svd> {
    let (m, n) = (a.nrows(), a.ncols());
    let bound = m.min(n);
    if k == 0 || k > bound {
        return Err(Error::InvalidParam(format!(
            "k must be in 1..={bound}, got {k}"
        )));
    }
    if bound <= DENSE_CUTOFF {
        return Ok(jacobi_svd(&a.to_dense()).truncate(k));
    }
    Ok(subspace_svd(a, k, seed))
}

/// Exact SVD of a dense matrix by one-sided Jacobi (Hestenes) rotations.
///
/// Works on the transpose when that gives fewer columns to orthogonalize.
pub fn jacobi_svd(a: &DenseMatrix) -> Svd {
    if a.ncols() > a.nrows() {
        let svd = jacobi_svd(&a.transpose());
        let k = svd.singular_values.len();
        return Svd {
            u: svd.vt.transpose(),
            singular_values: svd.singular_values,
            vt: transpose_into_rows(&svd.u, k),
        };
    }
    let m = a.nrows();
    let n = a.ncols();
    // Column-major working copies: w accumulates A·(rotations), v the rotations.
    let mut w: Vec<Vec<f64>> = (0..n).map(|c| (0..m).map(|r| a.get(r, c)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|c| (0..n).map(|r| f64::from(u8::from(r == c))).collect())
        .collect();

    let eps = f64::EPSILON;
    let tol_rel = 4.0 * eps * eps;
    let tol_abs = eps * eps;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = dot(&w[p], &w[p]);
                let beta: f64 = dot(&w[q], &w[q]);
                let gamma: f64 = dot(&w[p], &w[q]);
                if gamma * gamma <= tol_rel * alpha * beta || gamma * gamma <= tol_abs {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta > 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    // Singular values are the column norms of w; sort descending, breaking
    // exact ties by column index so the order is total.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = w.iter().map(|col| dot(col, col).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));

    let mut u = DenseMatrix::zeros(m, n);
    let mut vt = DenseMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (slot, &col) in order.iter().enumerate() {
        let sigma = norms[col];
        singular_values.push(sigma);
        // Canonical sign: largest-|entry| component of v is positive.
        let vmax = v[col]
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                a.abs()
                    .partial_cmp(&b.abs())
                    .unwrap()
                    .then(j.cmp(i))
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        let flip = if v[col][vmax] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..m {
            let val = if sigma > 0.0 { w[col][r] / sigma } else { 0.0 };
            u.set(r, slot, flip * val);
        }
        for r in 0..n {
            vt.set(slot, r, flip * v[col][r]);
        }
    }
    Svd {
        u,
        singular_values,
        vt,
    }
}

fn transpose_into_rows(u: &DenseMatrix, k: usize) -> DenseMatrix {
    let t = u.transpose();
    let mut out = DenseMatrix::zeros(k, t.ncols());
    for r in 0..k {
        for c in 0..t.ncols() {
            out.set(r, c, t.get(r, c));
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let nx = c * *x - s * *y;
        let ny = s * *x + c * *y;
        *x = nx;
        *y = ny;
    }
}

/// Randomized subspace (block power) iteration for the top-k subspace,
/// finished with an exact Jacobi SVD of the projected block.
fn subspace_svd(a: &SparseMatrix, k: usize, seed: u64) -> Svd {
    let (m, n) = (a.nrows(), a.ncols());
    let block = (k + OVERSAMPLE).min(m.min(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = DenseMatrix::zeros(n, block);
    for r in 0..n {
        for c in 0..block {
            omega.set(r, c, rng.random::<f64>() * 2.0 - 1.0);
        }
    }
    let mut y = a.mul_dense(&omega);
    let mut sigma_prev = vec![0.0f64; k];
    let mut q = orthonormalize(&y);
    for _ in 0..MAX_ITER {
        let z = orthonormalize(&a.t_mul_dense(&q));
        y = a.mul_dense(&z);
        // Column norms of A·Z estimate the singular values.
        let mut sigma: Vec<f64> = (0..k)
            .map(|c| (0..m).map(|r| y.get(r, c).powi(2)).sum::<f64>().sqrt())
            .collect();
        sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let scale = sigma[0].max(1e-300);
        let delta = sigma
            .iter()
            .zip(&sigma_prev)
            .map(|(s, p)| (s - p).abs())
            .fold(0.0f64, f64::max);
        q = orthonormalize(&y);
        if delta <= CONV_TOL * scale {
            break;
        }
        sigma_prev = sigma;
    }
    // Project: B = Qᵀ A (block×n), then exact SVD of the small block.
    let b = a.t_mul_dense(&q).transpose();
    let svd_b = jacobi_svd(&b);
    let u = q.matmul(&svd_b.u);
    Svd {
        u,
        singular_values: svd_b.singular_values,
        vt: svd_b.vt,
    }
    .truncate(k)
}

/// Modified Gram-Schmidt with a second pass; zero columns are replaced by
/// deterministic unit vectors so the result is always a full orthonormal set.
fn orthonormalize(a: &DenseMatrix) -> DenseMatrix {
    let m = a.nrows();
    let k = a.ncols();
    let mut cols: Vec<Vec<f64>> = (0..k).map(|c| (0..m).map(|r| a.get(r, c)).collect()).collect();
    for j in 0..k {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = dot(&cols[j], &cols[i]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(head[i].iter()) {
                    *x -= proj * y;
                }
            }
        }
        let norm = dot(&cols[j], &cols[j]).sqrt();
        if norm > 1e-300 {
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        } else {
            for (r, x) in cols[j].iter_mut().enumerate() {
                *x = f64::from(u8::from(r == j % m));
            }
        }
    }
    let mut out = DenseMatrix::zeros(m, k);
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            out.set(r, c, v);
        }
    }
    out
}
