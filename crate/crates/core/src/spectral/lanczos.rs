//! Implicitly restarted Lanczos iteration with full reorthogonalization.
//!
//! The iteration keeps an explicit orthonormal basis and the projected
//! matrix in dense form, so thick restarts and breakdown recovery reduce to
//! bookkeeping on a small symmetric matrix. Full reorthogonalization makes
//! the basis numerically orthonormal at O(n·m) per step, which is the right
//! trade for the modest subspace sizes used here.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::spectral::dense;
use crate::spectral::op::SymmetricOperator;
use crate::spectral::Options;

struct Subspace {
    /// Orthonormal basis vectors, each of length n.
    basis: Vec<Vec<f64>>,
    /// Projected symmetric matrix; entry (i, j) is vᵢᵀ A vⱼ. Only the
    /// leading `filled` block is meaningful.
    proj: Array2<f64>,
    /// Number of basis vectors whose projection column is known.
    filled: usize,
    /// Norm of the residual left after processing the last filled column.
    last_beta: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Remove the components of `w` along every vector in `basis` (two passes).
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>], coeffs: Option<&mut Vec<f64>>) {
    let mut total = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (i, v) in basis.iter().enumerate() {
            let h = dot(w, v);
            total[i] += h;
            for (wk, vk) in w.iter_mut().zip(v) {
                *wk -= h * vk;
            }
        }
    }
    if let Some(c) = coeffs {
        *c = total;
    }
}

fn random_unit(rng: &mut ChaCha12Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let nv = norm(&v);
        if nv > 1e-3 {
            return v.iter().map(|x| x / nv).collect();
        }
    }
}

/// A vector orthogonal to the current basis, for breakdown recovery.
/// Returns `None` when the basis already spans ℝⁿ.
fn fresh_direction(rng: &mut ChaCha12Rng, basis: &[Vec<f64>], n: usize) -> Option<Vec<f64>> {
    if basis.len() >= n {
        return None;
    }
    for _ in 0..20 {
        let mut v = random_unit(rng, n);
        reorthogonalize(&mut v, basis, None);
        let nv = norm(&v);
        if nv > 1e-8 {
            for x in &mut v {
                *x /= nv;
            }
            return Some(v);
        }
    }
    None
}

/// Ritz pairs of the filled projected block, ordered by decreasing |θ| with
/// magnitude ties broken toward the positive value. Returns (θ, coefficient
/// columns in the basis).
fn ritz_pairs(space: &Subspace) -> (Vec<f64>, Array2<f64>) {
    let f = space.filled;
    let block = space.proj.slice(ndarray::s![..f, ..f]).to_owned();
    let (vals, vecs) = dense::sym_eig(&block);
    let mut order: Vec<usize> = (0..f).collect();
    order.sort_by(|&a, &b| {
        vals[b]
            .abs()
            .partial_cmp(&vals[a].abs())
            .unwrap()
            .then(vals[b].partial_cmp(&vals[a]).unwrap())
    });
    let theta: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut q = Array2::<f64>::zeros((f, f));
    for (out, &i) in order.iter().enumerate() {
        for r in 0..f {
            q[[r, out]] = vecs[[r, i]];
        }
    }
    (theta, q)
}

/// Top-`d` eigenpairs by magnitude of a symmetric operator.
///
/// Eigenvectors are returned as columns with the sign convention that the
/// largest-magnitude coordinate of each vector is positive.
pub fn eig_sym_operator(
    op: &dyn SymmetricOperator,
    d: usize,
    opts: &Options,
) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = op.dim();
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "rank d = {d} must satisfy 1 <= d <= {n}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
    let m_max = n.min(2 * d + 10);
    let keep = (d + 5).min(m_max.saturating_sub(2)).max(1);

    let mut space = Subspace {
        basis: vec![random_unit(&mut rng, n)],
        proj: Array2::zeros((m_max, m_max)),
        filled: 0,
        last_beta: 0.0,
    };

    let mut work = vec![0.0; n];
    for _cycle in 0..opts.max_cycles {
        // Expand the subspace until it is full or the space is exhausted.
        while space.filled < space.basis.len() {
            let j = space.filled;
            op.apply(&space.basis[j], &mut work);
            let mut w = work.clone();
            let mut coeffs = Vec::new();
            reorthogonalize(&mut w, &space.basis[..=j], Some(&mut coeffs));
            for (i, &h) in coeffs.iter().enumerate() {
                space.proj[[i, j]] = h;
                space.proj[[j, i]] = h;
            }
            space.filled = j + 1;
            let beta = norm(&w);
            space.last_beta = beta;
            if space.filled == m_max {
                // Keep the residual direction as the (unprocessed) trailing
                // vector so the next cycle continues the Krylov recurrence.
                if beta > 1e-13 {
                    for x in &mut w {
                        *x /= beta;
                    }
                    space.basis.push(w);
                }
                break;
            }
            if beta > 1e-13 {
                for x in &mut w {
                    *x /= beta;
                }
                space.proj[[j + 1, j]] = beta;
                space.proj[[j, j + 1]] = beta;
                space.basis.push(w);
            } else {
                // Invariant subspace: continue from a fresh direction.
                match fresh_direction(&mut rng, &space.basis, n) {
                    Some(v) => {
                        space.basis.push(v);
                        space.last_beta = 0.0;
                    }
                    None => break, // whole space spanned
                }
            }
        }

        let (theta, q) = ritz_pairs(&space);
        let f = space.filled;
        let scale = theta.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let want = d.min(f);
        let converged = (0..want).all(|k| {
            let est = space.last_beta * q[[f - 1, k]].abs();
            est <= opts.tol * scale.max(f64::MIN_POSITIVE)
        });

        if converged && want == d {
            // Assemble Ritz vectors and verify residuals explicitly.
            let mut vectors = Array2::<f64>::zeros((n, d));
            for k in 0..d {
                for (i, v) in space.basis[..f].iter().enumerate() {
                    let c = q[[i, k]];
                    if c != 0.0 {
                        for (r, x) in v.iter().enumerate() {
                            vectors[[r, k]] += c * x;
                        }
                    }
                }
            }
            let mut worst = 0.0f64;
            for k in 0..d {
                let col: Vec<f64> = vectors.column(k).to_vec();
                op.apply(&col, &mut work);
                let res: f64 = work
                    .iter()
                    .zip(&col)
                    .map(|(ax, x)| (ax - theta[k] * x).powi(2))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(res);
            }
            if worst <= opts.tol * scale.max(f64::MIN_POSITIVE) || worst == 0.0 {
                let values: Vec<f64> = theta[..d].to_vec();
                apply_sign_convention(&mut vectors);
                return Ok((values, vectors));
            }
        }

        if f >= n {
            // Full space computed but residual check failed: numerical issue.
            return Err(Error::Convergence {
                residual: space.last_beta,
            });
        }

        // Thick restart: keep the leading Ritz vectors plus the residual
        // direction, compress the projected matrix to diagonal form.
        let keep_now = keep.min(f.saturating_sub(1)).max(1.min(f));
        let mut new_basis: Vec<Vec<f64>> = Vec::with_capacity(keep_now + 1);
        for k in 0..keep_now {
            let mut y = vec![0.0; n];
            for (i, v) in space.basis[..f].iter().enumerate() {
                let c = q[[i, k]];
                if c != 0.0 {
                    for (r, x) in v.iter().enumerate() {
                        y[r] += c * x;
                    }
                }
            }
            new_basis.push(y);
        }
        let resid = if space.basis.len() > f {
            Some(space.basis[f].clone())
        } else {
            fresh_direction(&mut rng, &new_basis, n)
        };
        space.proj.fill(0.0);
        for (k, &t) in theta[..keep_now].iter().enumerate() {
            space.proj[[k, k]] = t;
        }
        space.basis = new_basis;
        if let Some(r) = resid {
            space.basis.push(r);
        }
        space.filled = keep_now;
        space.last_beta = 0.0;
        if space.basis.len() == space.filled {
            // nothing left to expand with; exhausted space handled above
            return Err(Error::Convergence { residual: f64::NAN });
        }
    }

    Err(Error::Convergence {
        residual: space.last_beta,
    })
}

/// Flip each column so that its largest-magnitude coordinate (first such
/// index on ties) is positive.
pub fn apply_sign_convention(vectors: &mut Array2<f64>) {
    for mut col in vectors.columns_mut() {
        let mut best = 0usize;
        let mut best_abs = -1.0f64;
        for (i, &x) in col.iter().enumerate() {
            if x.abs() > best_abs + 1e-15 {
                best_abs = x.abs();
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.mapv_inplace(|x| -x);
        }
    }
}
