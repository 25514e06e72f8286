//! Prediction evaluation: ROC/AUC via the rank statistic with midrank tie
//! handling, negative-class subsampling over the zero entries of a target
//! snapshot, and repeated-subsampling confidence intervals for AUC
//! differences between methods.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::SnapshotSeries;
use crate::score::ScoreMatrix;

/// Negative-class construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsampleVariant {
    /// A uniform sample (without replacement) of the zero pairs of A_t.
    UniformZeros,
    /// The uniform sample, plus every pair that is zero at t but linked at
    /// some other snapshot of the observation window.
    ZerosPlusEverActive,
}

/// Subsampling scheme: variant, sample size and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsampleScheme {
    pub variant: SubsampleVariant,
    /// Random-part sample size; `None` chooses min(10·positives, zeros).
    pub sample_count: Option<usize>,
    pub seed: u64,
}

/// Negative pair set drawn for one snapshot.
#[derive(Debug, Clone)]
pub struct NegativeSample {
    pub pairs: Vec<(usize, usize)>,
    /// True when fewer zeros were available than requested.
    pub truncated: bool,
}

/// Per-snapshot evaluation record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotEval {
    /// 1-based snapshot index within the full observation window.
    pub t: usize,
    pub auc: f64,
    pub positives: usize,
    pub negatives: usize,
    pub truncated: bool,
}

/// Evaluation report for one method over a test window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub method_tag: String,
    pub scheme: SubsampleScheme,
    pub per_snapshot: Vec<SnapshotEval>,
    pub mean_auc: f64,
}

/// AUC by the Mann-Whitney rank statistic with midrank tie handling.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(
            "scores and labels differ in length".into(),
        ));
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric(
            "AUC needs at least one positive and one negative".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
    // midranks over tie groups
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + j + 2) as f64 / 2.0; // ranks are 1-based
        for &idx in &order[i..=j] {
            if labels[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// All zero pairs of snapshot `t0` over the kind's eligible pair space.
fn zero_pairs(series: &SnapshotSeries, t0: usize) -> Vec<(usize, usize)> {
    let links: BTreeSet<(usize, usize)> = series.links(t0).into_iter().collect();
    series
        .kind()
        .pairs()
        .into_iter()
        .filter(|p| !links.contains(p))
        .collect()
}

/// Pairs linked at least once anywhere in the window.
fn ever_active_pairs(series: &SnapshotSeries) -> BTreeSet<(usize, usize)> {
    let mut set = BTreeSet::new();
    for t0 in 0..series.t_count() {
        set.extend(series.links(t0));
    }
    set
}

/// Deterministic generator for the draw of snapshot `t0` and repetition
/// `rep` under `seed`; distinct (t0, rep) pairs use distinct streams.
fn draw_rng(seed: u64, t0: usize, rep: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(((t0 as u64) << 24) ^ (rep as u64) ^ 0x9e37_79b9);
    rng
}

/// Draw the negative class for predicting snapshot `t0` of `full`.
/// The ever-active augmentation of the second scheme looks at the whole
/// window held in `full`, including any test snapshots.
pub fn subsample_negatives(
    full: &SnapshotSeries,
    t0: usize,
    scheme: &SubsampleScheme,
    rep: usize,
) -> NegativeSample {
    let zeros = zero_pairs(full, t0);
    let positives = full.links(t0).len();
    let want = scheme
        .sample_count
        .unwrap_or_else(|| (10 * positives).min(zeros.len()))
        .max(1);
    let truncated = want > zeros.len();
    let take = want.min(zeros.len());
    let mut rng = draw_rng(scheme.seed, t0, rep);
    let mut sampled: Vec<(usize, usize)> = {
        let mut pool = zeros.clone();
        // partial Fisher-Yates: the first `take` entries form the sample
        for k in 0..take {
            let swap = k + (rng.next_u64() as usize) % (pool.len() - k);
            pool.swap(k, swap);
        }
        pool.truncate(take);
        pool
    };
    if scheme.variant == SubsampleVariant::ZerosPlusEverActive {
        let ever: BTreeSet<(usize, usize)> = ever_active_pairs(full);
        let links: BTreeSet<(usize, usize)> = full.links(t0).into_iter().collect();
        let mut set: BTreeSet<(usize, usize)> = sampled.into_iter().collect();
        for p in ever {
            if !links.contains(&p) {
                set.insert(p);
            }
        }
        sampled = set.into_iter().collect();
    } else {
        sampled.sort_unstable();
    }
    NegativeSample {
        pairs: sampled,
        truncated,
    }
}

/// Evaluate one method: each score matrix is scored against the links of
/// its target snapshot, with negatives drawn by the scheme.
pub fn evaluate_method(
    scores: &[ScoreMatrix],
    full: &SnapshotSeries,
    t_prime: usize,
    scheme: &SubsampleScheme,
    method_tag: &str,
) -> Result<EvalReport> {
    let t = full.t_count();
    if t_prime + scores.len() > t {
        return Err(Error::InvalidArgument(format!(
            "{} score matrices exceed the {} test snapshots",
            scores.len(),
            t - t_prime
        )));
    }
    let mut per_snapshot = Vec::with_capacity(scores.len());
    for (k, s) in scores.iter().enumerate() {
        let t0 = t_prime + k;
        let positives = full.links(t0);
        if positives.is_empty() {
            return Err(Error::UndefinedMetric(format!(
                "snapshot {} has no links",
                t0 + 1
            )));
        }
        let negatives = subsample_negatives(full, t0, scheme, 0);
        let auc = auc_of_split(s, &positives, &negatives.pairs)?;
        per_snapshot.push(SnapshotEval {
            t: t0 + 1,
            auc,
            positives: positives.len(),
            negatives: negatives.pairs.len(),
            truncated: negatives.truncated,
        });
    }
    let mean_auc = per_snapshot.iter().map(|e| e.auc).sum::<f64>() / per_snapshot.len().max(1) as f64;
    Ok(EvalReport {
        method_tag: method_tag.to_string(),
        scheme: *scheme,
        per_snapshot,
        mean_auc,
    })
}

fn auc_of_split(
    scores: &ScoreMatrix,
    positives: &[(usize, usize)],
    negatives: &[(usize, usize)],
) -> Result<f64> {
    let mut vals = Vec::with_capacity(positives.len() + negatives.len());
    let mut labels = Vec::with_capacity(vals.capacity());
    for &(i, j) in positives {
        vals.push(scores.entry(i, j));
        labels.push(true);
    }
    for &(i, j) in negatives {
        vals.push(scores.entry(i, j));
        labels.push(false);
    }
    roc_auc(&vals, &labels)
}

/// Confidence interval for a per-snapshot AUC difference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffInterval {
    pub t: usize,
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Paired repeated-subsampling intervals for AUC(a) − AUC(b): each of the
/// `m` repetitions draws one negative set per snapshot, shared between the
/// two methods, and the interval is the normal approximation over the
/// repetition differences.
pub fn auc_difference_ci(
    scores_a: &[ScoreMatrix],
    scores_b: &[ScoreMatrix],
    full: &SnapshotSeries,
    t_prime: usize,
    scheme: &SubsampleScheme,
    m: usize,
    level: f64,
) -> Result<Vec<DiffInterval>> {
    if m < 2 {
        return Err(Error::InvalidArgument(
            "difference CIs need at least 2 repetitions".into(),
        ));
    }
    if scores_a.len() != scores_b.len() {
        return Err(Error::InvalidArgument(
            "methods have different numbers of score matrices".into(),
        ));
    }
    if !(0.0..1.0).contains(&level) {
        return Err(Error::InvalidArgument(format!(
            "confidence level {level} outside (0, 1)"
        )));
    }
    let z = normal_quantile(0.5 + level / 2.0);
    let mut out = Vec::with_capacity(scores_a.len());
    for (k, (sa, sb)) in scores_a.iter().zip(scores_b).enumerate() {
        let t0 = t_prime + k;
        let positives = full.links(t0);
        let diffs: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|rep| {
                let neg = subsample_negatives(full, t0, scheme, rep);
                let auc_a = auc_of_split(sa, &positives, &neg.pairs)?;
                let auc_b = auc_of_split(sb, &positives, &neg.pairs)?;
                Ok(auc_a - auc_b)
            })
            .collect::<Result<_>>()?;
        // identical repetitions (no sampling randomness) give a degenerate
        // zero-width interval at the exact difference
        let (mean, sd) = if diffs.windows(2).all(|w| w[0] == w[1]) {
            (diffs[0], 0.0)
        } else {
            let mean = diffs.iter().sum::<f64>() / m as f64;
            let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
            (mean, var.sqrt())
        };
        out.push(DiffInterval {
            t: t0 + 1,
            mean,
            sd,
            lower: mean - z * sd,
            upper: mean + z * sd,
        });
    }
    Ok(out)
}

/// Standard normal quantile (Acklam's rational approximation; absolute
/// error below 1.2e-9, ample for interval endpoints).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let p_low = 0.02425;
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}
