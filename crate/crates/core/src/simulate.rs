//! Synthetic dynamic networks with retained ground truth: a seasonal
//! stochastic blockmodel with time-dependent community allocations, a
//! directed logistic dynamic model with a common trend parameter, and
//! generic GRDPG sampling from explicit latent positions.
//!
//! All draws come from ChaCha12 streams: stream 0 of the seed generates the
//! model parameters, stream t generates snapshot t, so snapshot sampling
//! can run in parallel and a fixed seed reproduces the series exactly.

use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::Signature;
use crate::error::{Error, Result};
use crate::graph::{CsrMatrix, GraphKind, SnapshotSeries};

/// Seasonal stochastic blockmodel configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeasonalSbmConfig {
    pub n: usize,
    /// Number of communities K.
    pub communities: usize,
    pub t_count: usize,
    /// Seasonal period s: each node has one community allocation per phase.
    pub period: usize,
    pub beta_a: f64,
    pub beta_b: f64,
    pub seed: u64,
}

impl SeasonalSbmConfig {
    /// The simulation-study defaults: n = 100, K = 5, T = 100, s = 7,
    /// Beta(1.2, 1.2).
    pub fn defaults(seed: u64) -> Self {
        SeasonalSbmConfig {
            n: 100,
            communities: 5,
            t_count: 100,
            period: 7,
            beta_a: 1.2,
            beta_b: 1.2,
            seed,
        }
    }
}

/// Ground truth of a seasonal SBM draw.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeasonalSbmTruth {
    /// Symmetric K×K block probability matrix.
    pub block_probs: Vec<Vec<f64>>,
    /// allocations[u][i]: community of node i during phase u = t mod s.
    pub allocations: Vec<Vec<usize>>,
}

impl SeasonalSbmTruth {
    /// Link probability of pair (i, j) at 1-based snapshot index t.
    pub fn probability(&self, i: usize, j: usize, t: usize) -> f64 {
        let phase = t % self.allocations.len();
        let (zi, zj) = (self.allocations[phase][i], self.allocations[phase][j]);
        self.block_probs[zi][zj]
    }
}

/// Draw a seasonal SBM series: a symmetric Beta-distributed block matrix,
/// per-phase uniform community allocations, and undirected hollow
/// Bernoulli sampling with P(A_ijt = 1) determined by the phase t mod s.
pub fn seasonal_sbm(cfg: &SeasonalSbmConfig) -> Result<(SnapshotSeries, SeasonalSbmTruth)> {
    if cfg.communities == 0 || cfg.communities > cfg.n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= K <= n, got K = {}, n = {}",
            cfg.communities, cfg.n
        )));
    }
    if cfg.period == 0 {
        return Err(Error::InvalidArgument("period must be >= 1".into()));
    }
    let beta = Beta::new(cfg.beta_a, cfg.beta_b)
        .map_err(|e| Error::InvalidArgument(format!("invalid Beta parameters: {e}")))?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let k = cfg.communities;
    // upper triangle including the diagonal, mirrored
    let mut block = vec![vec![0.0f64; k]; k];
    for a in 0..k {
        for b in a..k {
            let p = beta.sample(&mut rng);
            block[a][b] = p;
            block[b][a] = p;
        }
    }
    let allocations: Vec<Vec<usize>> = (0..cfg.period)
        .map(|_| (0..cfg.n).map(|_| rng.random_range(0..k)).collect())
        .collect();
    let truth = SeasonalSbmTruth {
        block_probs: block,
        allocations,
    };

    let snapshots: Vec<CsrMatrix> = (1..=cfg.t_count)
        .into_par_iter()
        .map(|t| {
            let mut rng_t = ChaCha12Rng::seed_from_u64(cfg.seed);
            rng_t.set_stream(t as u64);
            let mut pairs = Vec::new();
            for i in 0..cfg.n {
                for j in (i + 1)..cfg.n {
                    if rng_t.random::<f64>() < truth.probability(i, j, t) {
                        pairs.push((i, j));
                        pairs.push((j, i));
                    }
                }
            }
            CsrMatrix::from_binary_pairs(cfg.n, cfg.n, pairs)
        })
        .collect::<Result<_>>()?;
    let series = SnapshotSeries::from_matrices(GraphKind::Undirected { n: cfg.n }, snapshots)?;
    Ok((series, truth))
}

/// Logistic dynamic model configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticDynConfig {
    pub n: usize,
    pub t_count: usize,
    /// Common trend parameter θ.
    pub theta: f64,
    pub baseline_low: f64,
    pub baseline_high: f64,
    pub seed: u64,
}

impl LogisticDynConfig {
    /// Defaults: n = 100, T = 100, baselines Uniform(−6.9, 0).
    pub fn defaults(theta: f64, seed: u64) -> Self {
        LogisticDynConfig {
            n: 100,
            t_count: 100,
            theta,
            baseline_low: -6.9,
            baseline_high: 0.0,
            seed,
        }
    }
}

/// Ground truth of a logistic dynamic draw: per-edge baselines and trend
/// signs; probabilities are logit⁻¹(b_ij + c_ij·θ·(t−1)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticDynTruth {
    pub baseline: Vec<Vec<f64>>,
    pub trend_sign: Vec<Vec<f64>>,
    pub theta: f64,
}

impl LogisticDynTruth {
    /// Link probability of edge (i, j) at 1-based snapshot index t.
    pub fn probability(&self, i: usize, j: usize, t: usize) -> f64 {
        let x = self.baseline[i][j] + self.trend_sign[i][j] * self.theta * (t as f64 - 1.0);
        1.0 / (1.0 + (-x).exp())
    }
}

/// Draw a directed logistic dynamic series.
pub fn logistic_dynamic(cfg: &LogisticDynConfig) -> Result<(SnapshotSeries, LogisticDynTruth)> {
    if cfg.baseline_low >= cfg.baseline_high {
        return Err(Error::InvalidArgument(
            "baseline_low must be below baseline_high".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let n = cfg.n;
    let mut baseline = vec![vec![0.0f64; n]; n];
    let mut trend_sign = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            baseline[i][j] =
                cfg.baseline_low + rng.random::<f64>() * (cfg.baseline_high - cfg.baseline_low);
            trend_sign[i][j] = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
    }
    let truth = LogisticDynTruth {
        baseline,
        trend_sign,
        theta: cfg.theta,
    };
    let snapshots: Vec<CsrMatrix> = (1..=cfg.t_count)
        .into_par_iter()
        .map(|t| {
            let mut rng_t = ChaCha12Rng::seed_from_u64(cfg.seed);
            rng_t.set_stream(t as u64);
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng_t.random::<f64>() < truth.probability(i, j, t) {
                        pairs.push((i, j));
                    }
                }
            }
            CsrMatrix::from_binary_pairs(n, n, pairs)
        })
        .collect::<Result<_>>()?;
    let series = SnapshotSeries::from_matrices(GraphKind::Directed { n }, snapshots)?;
    Ok((series, truth))
}

/// One undirected hollow GRDPG draw from explicit latent positions:
/// P(A_ij = 1) = x_iᵀ I(d₊, d₋) x_j. Every pairwise probability must lie
/// in [0, 1].
pub fn grdpg_sample(
    positions: &ArrayView2<'_, f64>,
    signature: Signature,
    seed: u64,
) -> Result<CsrMatrix> {
    let n = positions.nrows();
    let d = positions.ncols();
    if signature.dim() != d {
        return Err(Error::ShapeMismatch(format!(
            "signature dimension {} does not match {} columns",
            signature.dim(),
            d
        )));
    }
    let metric: Vec<f64> = (0..d)
        .map(|k| if k < signature.d_plus { 1.0 } else { -1.0 })
        .collect();
    let mut probs = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let p: f64 = (0..d)
                .map(|k| positions[[i, k]] * metric[k] * positions[[j, k]])
                .sum();
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidLatentPosition {
                    row: i,
                    col: j,
                    value: p,
                });
            }
            probs[[i, j]] = p;
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < probs[[i, j]] {
                pairs.push((i, j));
                pairs.push((j, i));
            }
        }
    }
    CsrMatrix::from_binary_pairs(n, n, pairs)
}
