//! Small dense kernels: cyclic Jacobi eigendecomposition for symmetric
//! matrices, one-sided Jacobi SVD, and Gaussian elimination.
//!
//! These back the projected solves inside the Lanczos iteration and the
//! d×d decompositions needed by Procrustes alignment. They are O(k³) and
//! intended for matrices up to a few hundred rows.

use ndarray::{Array1, Array2};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, eigenvector columns), unordered.
pub fn sym_eig(a: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut m = a.clone();
    let mut v = Array2::<f64>::eye(n);
    if n <= 1 {
        return (m.diag().to_vec(), v);
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]] * m[[p, q]];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rows/cols p and q of m
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    (m.diag().to_vec(), v)
}

/// Thin SVD by one-sided Jacobi. Returns (u, sigma, v) with singular values
/// sorted decreasing; `a = u diag(sigma) vᵀ` with u, v column-orthonormal.
pub fn svd(a: &Array2<f64>) -> (Array2<f64>, Vec<f64>, Array2<f64>) {
    if a.nrows() < a.ncols() {
        let (u, s, v) = svd(&a.t().to_owned());
        return (v, s, u);
    }
    let m = a.nrows();
    let n = a.ncols();
    let mut b = a.clone();
    let mut v = Array2::<f64>::eye(n);
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for k in 0..m {
                    app += b[[k, p]] * b[[k, p]];
                    aqq += b[[k, q]] * b[[k, q]];
                    apq += b[[k, p]] * b[[k, q]];
                }
                if apq.abs() <= 1e-15 * (app * aqq).sqrt().max(1e-30 * scale) {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let bkp = b[[k, p]];
                    let bkq = b[[k, q]];
                    b[[k, p]] = c * bkp - s * bkq;
                    b[[k, q]] = s * bkp + c * bkq;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|k| b[[k, j]] * b[[k, j]]).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let mut u = Array2::<f64>::zeros((m, n));
    let mut vv = Array2::<f64>::zeros((n, n));
    let mut sigma = Vec::with_capacity(n);
    let smax = order.first().map(|&j| norms[j]).unwrap_or(0.0);
    for (out, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        for k in 0..n {
            vv[[k, out]] = v[[k, j]];
        }
        if norms[j] > 1e-13 * smax.max(1.0) {
            for k in 0..m {
                u[[k, out]] = b[[k, j]] / norms[j];
            }
        }
    }
    // Orthonormal completion for (numerically) zero singular values.
    complete_orthonormal(&mut u, &sigma, smax);
    (u, sigma, vv)
}

fn complete_orthonormal(u: &mut Array2<f64>, sigma: &[f64], smax: f64) {
    let m = u.nrows();
    let n = u.ncols();
    let mut fill_from = 0usize;
    for (j, &s) in sigma.iter().enumerate() {
        if s > 1e-13 * smax.max(1.0) {
            fill_from = j + 1;
        }
    }
    if fill_from >= n {
        return;
    }
    // deterministic candidate directions: unit axes cycled
    let mut axis = 0usize;
    for j in fill_from..n {
        loop {
            let mut cand = Array1::<f64>::zeros(m);
            cand[axis % m] = 1.0;
            axis += 1;
            for _ in 0..2 {
                for i in 0..j {
                    let dot: f64 = (0..m).map(|k| cand[k] * u[[k, i]]).sum();
                    for k in 0..m {
                        cand[k] -= dot * u[[k, i]];
                    }
                }
            }
            let norm: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for k in 0..m {
                    u[[k, j]] = cand[k] / norm;
                }
                break;
            }
            assert!(axis <= 2 * m + n, "failed to complete orthonormal basis");
        }
    }
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
/// Returns `None` when A is numerically singular.
pub fn solve(a: &Array2<f64>, b: &Array2<f64>) -> Option<Array2<f64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let k = b.ncols();
    let mut m = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[[r, col]].abs() > m[[piv, col]].abs() {
                piv = r;
            }
        }
        if m[[piv, col]].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                m.swap([col, c], [piv, c]);
            }
            for c in 0..k {
                x.swap([col, c], [piv, c]);
            }
        }
        let d = m[[col, col]];
        for r in (col + 1)..n {
            let f = m[[r, col]] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[[r, c]] -= f * m[[col, c]];
            }
            for c in 0..k {
                x[[r, c]] -= f * x[[col, c]];
            }
        }
    }
    for col in (0..n).rev() {
        let d = m[[col, col]];
        for c in 0..k {
            let mut s = x[[col, c]];
            for r in (col + 1)..n {
                s -= m[[col, r]] * x[[r, c]];
            }
            x[[col, c]] = s / d;
        }
    }
    Some(x)
}
