//! Shared oracle helpers for integration tests: a self-contained dense
//! Jacobi eigensolver and seeded random matrix builders, independent of
//! the library's numerical kernels.
#![allow(dead_code)]

use linkpred_core::graph::CsrMatrix;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Dense cyclic Jacobi eigendecomposition written independently of the
/// library kernels. Returns (eigenvalues, eigenvector columns) ordered by
/// decreasing |λ| with magnitude ties broken toward the positive value.
pub fn oracle_sym_eig(a: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = Array2::<f64>::eye(n);
    for _ in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]].abs();
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[[p, q]].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * m[[p, q]]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mp, mq) = (m[[p, k]], m[[q, k]]);
                    m[[p, k]] = c * mp - s * mq;
                    m[[q, k]] = s * mp + c * mq;
                }
                for k in 0..n {
                    let (mp, mq) = (m[[k, p]], m[[k, q]]);
                    m[[k, p]] = c * mp - s * mq;
                    m[[k, q]] = s * mp + c * mq;
                }
                for k in 0..n {
                    let (vp, vq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = c * vp - s * vq;
                    v[[k, q]] = s * vp + c * vq;
                }
            }
        }
    }
    let vals: Vec<f64> = (0..n).map(|i| m[[i, i]]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        vals[y]
            .abs()
            .partial_cmp(&vals[x].abs())
            .unwrap()
            .then(vals[y].partial_cmp(&vals[x]).unwrap())
    });
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs = Array2::<f64>::zeros((n, n));
    for (out, &i) in order.iter().enumerate() {
        for r in 0..n {
            sorted_vecs[[r, out]] = v[[r, i]];
        }
    }
    (sorted_vals, sorted_vecs)
}

pub fn random_sparse_symmetric(n: usize, density: f64, seed: u64) -> CsrMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut trips = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < density {
                let v = rng.random::<f64>() * 2.0 - 1.0;
                trips.push((i, j, v));
                if i != j {
                    trips.push((j, i, v));
                }
            }
        }
    }
    CsrMatrix::from_triplets(n, n, trips).unwrap()
}

pub fn random_sparse(nr: usize, nc: usize, density: f64, seed: u64) -> CsrMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut trips = Vec::new();
    for i in 0..nr {
        for j in 0..nc {
            if rng.random::<f64>() < density {
                trips.push((i, j, rng.random::<f64>() * 2.0 - 1.0));
            }
        }
    }
    CsrMatrix::from_triplets(nr, nc, trips).unwrap()
}

pub fn random_matrix(n: usize, d: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Array2::from_shape_fn((n, d), |_| rng.random::<f64>() * 2.0 - 1.0)
}

/// Orthogonal matrix from Gram-Schmidt of a seeded random matrix.
pub fn random_orthogonal(d: usize, seed: u64) -> Array2<f64> {
    let g = random_matrix(d, d, seed);
    let mut q = Array2::<f64>::zeros((d, d));
    for j in 0..d {
        let mut col: ndarray::Array1<f64> = g.column(j).to_owned();
        for k in 0..j {
            let qk = q.column(k);
            let dot = col.dot(&qk);
            col = col - &(qk.to_owned() * dot);
        }
        let norm = col.dot(&col).sqrt();
        q.column_mut(j).assign(&(col / norm));
    }
    q
}

/// Least-squares slope of a series against 0..n−1, with its standard error.
pub fn lsq_slope(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym: f64 = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, v) in y.iter().enumerate() {
        let dx = k as f64 - xm;
        sxy += dx * (v - ym);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let rss: f64 = y
        .iter()
        .enumerate()
        .map(|(k, v)| (v - ym - slope * (k as f64 - xm)).powi(2))
        .sum();
    (slope, (rss / (n - 2.0) / sxx).sqrt())
}
