//! Row-compressed sparse matrices with sorted column indices.
//!
//! All downstream kernels are row-major matrix-vector products, so CSR is
//! the only storage format used in the crate.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Sparse real matrix in CSR form. Column indices are sorted within each row
/// and duplicate entries are merged at construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Empty matrix with the given shape.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Build from (row, col, value) triplets. Duplicates are summed; entries
    /// that sum to exactly zero are kept out of the structure.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({i}, {j}) outside {nrows}x{ncols}"
                )));
            }
            rows[i].push((j, v));
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in &mut rows {
            row.sort_unstable_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut v = 0.0;
                while k < row.len() && row[k].0 == j {
                    v += row[k].1;
                    k += 1;
                }
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        })
    }

    /// Build a binary matrix from distinct (row, col) pairs; all entries are 1.
    pub fn from_binary_pairs(
        nrows: usize,
        ncols: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = Self::from_triplets(nrows, ncols, pairs.into_iter().map(|(i, j)| (i, j, 1.0)))?;
        // Duplicate pairs collapse to a single unit entry.
        for v in &mut m.values {
            *v = 1.0;
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.indptr[i];
        let hi = self.indptr[i + 1];
        (&self.indices[lo..hi], &self.values[lo..hi])
    }

    /// Entry lookup by binary search within the row.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterate over all stored entries as (row, col, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        if self.nrows >= 4096 {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| {
                let (cols, vals) = self.row(i);
                *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
            });
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                let (cols, vals) = self.row(i);
                *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
            }
        }
    }

    /// y = Aᵀ x
    pub fn matvec_t(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        y.fill(0.0);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let xi = x[i];
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * xi;
            }
        }
    }

    /// Dense copy, for small matrices and tests.
    pub fn to_dense(&self) -> Array2<f64> {
        let mut a = Array2::zeros((self.nrows, self.ncols));
        for (i, j, v) in self.iter() {
            a[[i, j]] = v;
        }
        a
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.ncols];
        for &j in &self.indices {
            counts[j] += 1;
        }
        let mut indptr = Vec::with_capacity(self.ncols + 1);
        indptr.push(0);
        for c in &counts {
            let last = *indptr.last().unwrap();
            indptr.push(last + c);
        }
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![0f64; self.nnz()];
        let mut next = indptr.clone();
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let k = next[j];
                indices[k] = i;
                values[k] = v;
                next[j] += 1;
            }
        }
        CsrMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            indptr,
            indices,
            values,
        }
    }

    /// Weighted sum Σ_k w_k M_k of equally shaped matrices.
    pub fn weighted_sum(mats: &[&CsrMatrix], weights: &[f64]) -> Result<CsrMatrix> {
        if mats.is_empty() || mats.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "weighted_sum needs one weight per matrix".into(),
            ));
        }
        let (nrows, ncols) = mats[0].shape();
        for m in mats {
            if m.shape() != (nrows, ncols) {
                return Err(Error::ShapeMismatch("matrices differ in shape".into()));
            }
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        let mut scratch = vec![0f64; ncols];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..nrows {
            for (m, &w) in mats.iter().zip(weights) {
                if w == 0.0 {
                    continue;
                }
                let (cols, vals) = m.row(i);
                for (&j, &v) in cols.iter().zip(vals) {
                    if scratch[j] == 0.0 {
                        touched.push(j);
                    }
                    scratch[j] += w * v;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if scratch[j] != 0.0 {
                    indices.push(j);
                    values.push(scratch[j]);
                }
                scratch[j] = 0.0;
            }
            touched.clear();
            indptr.push(indices.len());
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        })
    }

    /// Structural symmetry check. Small matrices are checked exhaustively;
    /// larger ones via a seeded spot-check of stored entries.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        const EXHAUSTIVE_CAP: usize = 20_000;
        if self.nnz() <= EXHAUSTIVE_CAP {
            return self
                .iter()
                .all(|(i, j, v)| (self.get(j, i) - v).abs() <= tol);
        }
        let mut rng = ChaCha12Rng::seed_from_u64(0x5a17);
        (0..512).all(|_| {
            let k = rng.random_range(0..self.nnz());
            let i = match self.indptr.binary_search(&k) {
                Ok(p) => {
                    // indptr[p] == k: entry k starts row p unless row p is empty
                    let mut r = p;
                    while self.indptr[r + 1] == k {
                        r += 1;
                    }
                    r
                }
                Err(p) => p - 1,
            };
            let j = self.indices[k];
            (self.get(j, i) - self.values[k]).abs() <= tol
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_sort() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(0, 2, 1.0), (0, 0, 2.0), (0, 2, 3.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.row(0), (&[0usize, 2][..], &[2.0, 4.0][..]));
        assert_eq!(m.get(0, 2), 4.0);
        assert_eq!(m.get(1, 1), 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let m = CsrMatrix::from_triplets(3, 2, vec![(0, 0, 1.0), (1, 1, -2.0), (2, 0, 0.5)]).unwrap();
        let x = [2.0, 3.0];
        let mut y = [0.0; 3];
        m.matvec(&x, &mut y);
        assert_eq!(y, [2.0, -6.0, 1.0]);
        let mut z = [0.0; 2];
        m.matvec_t(&y, &mut z);
        let d = m.to_dense();
        let want = d.t().dot(&ndarray::arr1(&y));
        assert!((z[0] - want[0]).abs() < 1e-12 && (z[1] - want[1]).abs() < 1e-12);
    }

    #[test]
    fn weighted_sum_matches_dense_loop() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let b = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (1, 1, 4.0)]).unwrap();
        let s = CsrMatrix::weighted_sum(&[&a, &b], &[0.5, 2.0]).unwrap();
        assert_eq!(s.get(0, 1), 2.5);
        assert_eq!(s.get(1, 0), 0.5);
        assert_eq!(s.get(1, 1), 8.0);
    }

    #[test]
    fn transpose_roundtrip() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(0, 2, 1.0), (1, 0, -1.0)]).unwrap();
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().get(2, 0), 1.0);
    }

    #[test]
    fn symmetry_check() {
        let s = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(s.is_symmetric(0.0));
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0)]).unwrap();
        assert!(!a.is_symmetric(0.0));
    }
}
