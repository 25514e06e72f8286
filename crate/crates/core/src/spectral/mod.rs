//! Truncated eigendecompositions and SVDs of large sparse matrices, plus
//! automatic rank selection via the profile-likelihood elbow criterion.
//!
//! The kernels are matrix-free: anything implementing [`SymmetricOperator`]
//! or [`MatrixOperator`] can be decomposed, which lets callers avoid
//! materializing block matrices. Decompositions are deterministic given the
//! seed in [`Options`] and order spectra by decreasing magnitude with
//! magnitude ties broken toward the positive value.

pub mod dense;
mod lanczos;
mod op;

pub use lanczos::apply_sign_convention;
pub use op::{GramOperator, MatrixOperator, SumOuterOperator, SymmetricOperator};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::CsrMatrix;

/// Tolerances and limits for the iterative decompositions.
#[derive(Debug, Clone)]
pub struct Options {
    /// Relative residual tolerance: ‖Aγ − λγ‖ ≤ tol·‖A‖.
    pub tol: f64,
    /// Maximum number of restart cycles before giving up.
    pub max_cycles: usize,
    /// Seed for the start vector and breakdown recovery directions.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: 1e-10,
            max_cycles: 300,
            seed: 0x51ec,
        }
    }
}

/// Top-d eigenpairs of a symmetric matrix, ordered by decreasing |λ|.
#[derive(Debug, Clone)]
pub struct EigPair {
    /// Eigenvalues, |values| non-increasing.
    pub values: Vec<f64>,
    /// Orthonormal eigenvector columns, n×d.
    pub vectors: Array2<f64>,
}

/// Top-d singular triplets, singular values decreasing.
#[derive(Debug, Clone)]
pub struct SvdTriple {
    pub u: Array2<f64>,
    pub s: Vec<f64>,
    pub v: Array2<f64>,
}

/// Top-d eigenpairs (by magnitude) of a sparse symmetric matrix.
pub fn truncated_eig(a: &CsrMatrix, d: usize) -> Result<EigPair> {
    truncated_eig_with(a, d, &Options::default())
}

pub fn truncated_eig_with(a: &CsrMatrix, d: usize, opts: &Options) -> Result<EigPair> {
    if a.nrows() != a.ncols() || !a.is_symmetric(1e-12) {
        return Err(Error::NotSymmetric);
    }
    truncated_eig_operator(a, d, opts)
}

/// Eigenpairs of a matrix-free symmetric operator. The caller asserts
/// symmetry; no structural check is possible.
pub fn truncated_eig_operator(
    op: &dyn SymmetricOperator,
    d: usize,
    opts: &Options,
) -> Result<EigPair> {
    let (values, vectors) = lanczos::eig_sym_operator(op, d, opts)?;
    Ok(EigPair { values, vectors })
}

/// Top-d singular triplets of a sparse matrix.
pub fn truncated_svd(a: &CsrMatrix, d: usize) -> Result<SvdTriple> {
    truncated_svd_with(a, d, &Options::default())
}

pub fn truncated_svd_with(a: &CsrMatrix, d: usize, opts: &Options) -> Result<SvdTriple> {
    truncated_svd_operator(a, d, opts)
}

/// Singular triplets of a matrix-free operator, computed from the Lanczos
/// eigendecomposition of the Gram operator on the smaller side.
pub fn truncated_svd_operator(
    a: &dyn MatrixOperator,
    d: usize,
    opts: &Options,
) -> Result<SvdTriple> {
    let (n, m) = (a.nrows(), a.ncols());
    let q = n.min(m);
    if d == 0 || d > q {
        return Err(Error::InvalidArgument(format!(
            "rank d = {d} must satisfy 1 <= d <= min({n}, {m})"
        )));
    }
    let gram = GramOperator::smaller_side(a);
    let (theta, w) = lanczos::eig_sym_operator(&gram, d, opts)?;
    let s: Vec<f64> = theta.iter().map(|&t| t.max(0.0).sqrt()).collect();
    let smax = s.first().copied().unwrap_or(0.0);

    // Recover the other side: u = A v / σ (or v = Aᵀ u / σ).
    let (solved_rows, solved_len, other_len) = if gram.is_left() {
        (true, n, m)
    } else {
        (false, m, n)
    };
    let mut solved = Array2::<f64>::zeros((solved_len, d));
    let mut other = Array2::<f64>::zeros((other_len, d));
    let mut tmp = vec![0.0; other_len];
    for k in 0..d {
        for r in 0..solved_len {
            solved[[r, k]] = w[[r, k]];
        }
        if s[k] > 1e-12 * smax.max(1.0) {
            let x: Vec<f64> = (0..solved_len).map(|r| w[[r, k]]).collect();
            if solved_rows {
                a.apply_t(&x, &mut tmp);
            } else {
                a.apply(&x, &mut tmp);
            }
            for r in 0..other_len {
                other[[r, k]] = tmp[r] / s[k];
            }
        }
    }
    complete_zero_columns(&mut other, &s, smax);

    let (mut u, mut v) = if solved_rows {
        (solved, other)
    } else {
        (other, solved)
    };
    // Sign convention on u, mirrored onto v so u σ vᵀ is unchanged.
    for k in 0..d {
        let col = u.column(k);
        let mut best = 0usize;
        let mut best_abs = -1.0;
        for (i, &x) in col.iter().enumerate() {
            if x.abs() > best_abs + 1e-15 {
                best_abs = x.abs();
                best = i;
            }
        }
        if u[[best, k]] < 0.0 {
            u.column_mut(k).mapv_inplace(|x| -x);
            v.column_mut(k).mapv_inplace(|x| -x);
        }
    }
    Ok(SvdTriple { u, s, v })
}

fn complete_zero_columns(mat: &mut Array2<f64>, s: &[f64], smax: f64) {
    let rows = mat.nrows();
    let mut axis = 0usize;
    for k in 0..s.len() {
        if s[k] > 1e-12 * smax.max(1.0) {
            continue;
        }
        loop {
            let mut cand = vec![0.0; rows];
            cand[axis % rows] = 1.0;
            axis += 1;
            for _ in 0..2 {
                for j in 0..s.len() {
                    if j == k {
                        continue;
                    }
                    let dot: f64 = (0..rows).map(|r| cand[r] * mat[[r, j]]).sum();
                    for (r, c) in cand.iter_mut().enumerate() {
                        *c -= dot * mat[[r, j]];
                    }
                }
            }
            let norm: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for (r, c) in cand.iter().enumerate() {
                    mat[[r, k]] = c / norm;
                }
                break;
            }
            assert!(axis <= 3 * rows, "failed to complete singular basis");
        }
    }
}

/// Rank selection by the two-group Gaussian profile log-likelihood over a
/// scree of non-negative values sorted in decreasing order. Returns the
/// first argmax over split points q ∈ {1, …, max_rank − 1}.
pub fn select_dim_elbow(values: &[f64], max_rank: usize) -> Result<usize> {
    let m = values.len();
    if m < 3 {
        return Err(Error::InvalidArgument(
            "elbow selection needs at least 3 values".into(),
        ));
    }
    if values.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidArgument("scree values must be >= 0".into()));
    }
    if values.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "scree values must be sorted decreasing".into(),
        ));
    }
    let q_hi = max_rank.min(m).saturating_sub(1).max(1);
    let mut best_q = 1usize;
    let mut best_ll = f64::NEG_INFINITY;
    for q in 1..=q_hi {
        let (g1, g2) = values.split_at(q);
        let mu1 = g1.iter().sum::<f64>() / g1.len() as f64;
        let mu2 = g2.iter().sum::<f64>() / g2.len() as f64;
        let ss: f64 = g1.iter().map(|v| (v - mu1).powi(2)).sum::<f64>()
            + g2.iter().map(|v| (v - mu2).powi(2)).sum::<f64>();
        // pooled variance with two estimated means
        let var = ss / (m - 2) as f64;
        let ll = if var < 1e-300 {
            f64::INFINITY
        } else {
            -0.5 * m as f64 * (2.0 * std::f64::consts::PI * var).ln() - ss / (2.0 * var)
        };
        if ll > best_ll {
            best_ll = ll;
            best_q = q;
        }
    }
    Ok(best_q)
}
