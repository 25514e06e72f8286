//! Matrix-free linear operators consumed by the Lanczos kernels.

use ndarray::Array2;

use crate::graph::CsrMatrix;

/// Symmetric linear operator on ℝⁿ.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    /// y = A x
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// General (possibly rectangular) operator with a transpose product.
pub trait MatrixOperator: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn apply_t(&self, x: &[f64], y: &mut [f64]);
}

impl SymmetricOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y);
    }
}

impl MatrixOperator for CsrMatrix {
    fn nrows(&self) -> usize {
        CsrMatrix::nrows(self)
    }

    fn ncols(&self) -> usize {
        CsrMatrix::ncols(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y);
    }

    fn apply_t(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_t(x, y);
    }
}

/// Gram operator of a rectangular operator: AᵀA when `transposed_side` is
/// false, AAᵀ otherwise. Always the smaller of the two in our callers.
pub struct GramOperator<'a, M: MatrixOperator + ?Sized> {
    matrix: &'a M,
    use_left: bool,
}

impl<'a, M: MatrixOperator + ?Sized> GramOperator<'a, M> {
    /// Gram operator on the smaller side of `matrix`.
    pub fn smaller_side(matrix: &'a M) -> Self {
        GramOperator {
            use_left: matrix.nrows() <= matrix.ncols(),
            matrix,
        }
    }

    /// True when the operator is AAᵀ (acting on row space of A).
    pub fn is_left(&self) -> bool {
        self.use_left
    }
}

impl<M: MatrixOperator + ?Sized> SymmetricOperator for GramOperator<'_, M> {
    fn dim(&self) -> usize {
        if self.use_left {
            self.matrix.nrows()
        } else {
            self.matrix.ncols()
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        if self.use_left {
            let mut tmp = vec![0.0; self.matrix.ncols()];
            self.matrix.apply_t(x, &mut tmp);
            self.matrix.apply(&tmp, y);
        } else {
            let mut tmp = vec![0.0; self.matrix.nrows()];
            self.matrix.apply(x, &mut tmp);
            self.matrix.apply_t(&tmp, y);
        }
    }
}

/// Σ_k B_k B_kᵀ for a list of equally-tall dense blocks, applied without
/// forming the n×n product.
pub struct SumOuterOperator<'a> {
    blocks: &'a [Array2<f64>],
    dim: usize,
}

impl<'a> SumOuterOperator<'a> {
    pub fn new(blocks: &'a [Array2<f64>]) -> Self {
        let dim = blocks.first().map(|b| b.nrows()).unwrap_or(0);
        assert!(blocks.iter().all(|b| b.nrows() == dim));
        SumOuterOperator { blocks, dim }
    }
}

impl SymmetricOperator for SumOuterOperator<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        let xv = ndarray::ArrayView1::from(x);
        for b in self.blocks {
            let coeff = b.t().dot(&xv);
            let contrib = b.dot(&coeff);
            for (yi, c) in y.iter_mut().zip(contrib.iter()) {
                *yi += c;
            }
        }
    }
}
