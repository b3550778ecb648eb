//! Small dense and sparse (CSR) matrix types shared by the vector-space,
//! clustering, and evaluation modules.

use serde::{Deserialize, Serialize};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> DenseMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> DenseMatrix {
        assert_eq!(data.len(), rows * cols);
        DenseMatrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// `self * other`
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Euclidean distance between two equal-length points.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from per-row (column, value) lists; columns must be strictly
    /// increasing within a row.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, f64)>]) -> SparseMatrix {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in rows {
            let mut last: Option<usize> = None;
            for &(c, v) in row {
                assert!(c < cols, "column out of range");
                assert!(last.is_none_or(|l| c > l), "columns must be increasing");
                last = Some(c);
                if v != 0.0 {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        SparseMatrix {
            rows: rows.len(),
            cols,
            indptr,
            indices,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All (row, col, value) triplets in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            out.set(r, c, v);
        }
        out
    }

    /// `self * other` with a dense right-hand side.
    pub fn mul_dense(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.nrows());
        let mut out = DenseMatrix::zeros(self.rows, other.ncols());
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                let orow = other.row(c);
                let out_row = out.row_mut(r);
                for (j, &o) in orow.iter().enumerate() {
                    out_row[j] += v * o;
                }
            }
        }
        out
    }

    /// `selfᵀ * other` with a dense right-hand side.
    pub fn t_mul_dense(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.nrows());
        let mut out = DenseMatrix::zeros(self.cols, other.ncols());
        for r in 0..self.rows {
            let orow: Vec<f64> = other.row(r).to_vec();
            for (c, v) in self.row(r) {
                let out_row = out.row_mut(c);
                for (j, &o) in orow.iter().enumerate() {
                    out_row[j] += v * o;
                }
            }
        }
        out
    }

    /// L2 norm of each row.
    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.row(r).map(|(_, v)| v * v).sum::<f64>().sqrt())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_matmul_and_transpose() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = DenseMatrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]);
        let c = a.matmul(&b);
        assert_eq!(c.row(0), [19.0, 22.0]);
        assert_eq!(c.row(1), [43.0, 50.0]);
        let t = a.transpose();
        assert_eq!(t.row(0), [1.0, 3.0]);
    }

    #[test]
    fn sparse_row_iteration_and_products() {
        let m = SparseMatrix::from_rows(3, &[vec![(0, 1.0), (2, 2.0)], vec![(1, 3.0)]]);
        assert_eq!(m.nnz(), 3);
        let dense = m.to_dense();
        assert_eq!(dense.get(0, 2), 2.0);
        let x = DenseMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0]]);
        let y = m.mul_dense(&x);
        assert_eq!(y.row(0), [3.0]);
        assert_eq!(y.row(1), [3.0]);
        let z = m.t_mul_dense(&DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]));
        assert_eq!(z.row(0), [1.0]);
        assert_eq!(z.row(1), [3.0]);
        assert_eq!(z.row(2), [2.0]);
    }
}
