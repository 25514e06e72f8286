//! Link-score combiners. Every method produces a [`ScoreMatrix`] whose
//! entries rank candidate links for one prediction horizon.
//!
//! Averaging combiners (collapsed, AIP, IPA, COSIE) use the training window
//! alone and emit a single matrix reused across horizons. Forecast
//! combiners (predicted adjacency, PIP, IPP) fit one model per edge, per
//! embedding coordinate or per COSIE entry and emit one matrix per horizon
//! from the single training fit. Scores are left unclamped: evaluation is
//! rank-based.

use ndarray::Array2;
use rayon::prelude::*;
use std::collections::HashMap;

use crate::align::{gpa_with, GpaResult, GPA_MAX_ITER, GPA_TOL};
use crate::embed::{self, CosieDecomposition, EmbeddingSeq};
use crate::error::{Error, Result};
use crate::forecast::{auto_sari, forecast, SariBounds};
use crate::graph::{CsrMatrix, GraphKind, SnapshotSeries, WeightVector};
use crate::spectral::Options;

/// Storage limits and spectral options shared by the scorers.
#[derive(Debug, Clone)]
pub struct ScoreConfig {
    pub spectral: Options,
    /// Above this row/column count, scores stay in factored (lazy) form.
    pub dense_cap: usize,
    /// Hard cap on the number of per-edge forecast series.
    pub series_cap: usize,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            spectral: Options::default(),
            dense_cap: 20_000,
            series_cap: 1_000_000,
        }
    }
}

/// Forecaster settings shared by the forecast-based scorers.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ForecasterConfig {
    /// Seasonal period s.
    pub period: usize,
    pub bounds: SariBounds,
}

impl Default for ForecasterConfig {
    fn default() -> Self {
        ForecasterConfig {
            period: 7,
            bounds: SariBounds::default(),
        }
    }
}

/// Dense or factored score storage. The factored form represents
/// S = left · rightᵀ and evaluates entries lazily.
#[derive(Debug, Clone)]
pub enum ScoreValues {
    Dense(Array2<f64>),
    LowRank {
        left: Array2<f64>,
        right: Array2<f64>,
    },
}

/// Link-score matrix for one prediction horizon.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    pub values: ScoreValues,
    /// 1-based index of the snapshot this matrix predicts, when known.
    pub horizon: Option<usize>,
    pub method_tag: String,
}

impl ScoreMatrix {
    pub fn shape(&self) -> (usize, usize) {
        match &self.values {
            ScoreValues::Dense(m) => (m.nrows(), m.ncols()),
            ScoreValues::LowRank { left, right } => (left.nrows(), right.nrows()),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match &self.values {
            ScoreValues::Dense(m) => m[[i, j]],
            ScoreValues::LowRank { left, right } => {
                let l = left.row(i);
                let r = right.row(j);
                l.dot(&r)
            }
        }
    }

    /// Materialize as a dense matrix (intended for desk-scale instances).
    pub fn to_dense(&self) -> Array2<f64> {
        match &self.values {
            ScoreValues::Dense(m) => m.clone(),
            ScoreValues::LowRank { left, right } => left.dot(&right.t()),
        }
    }

    fn from_factors(
        left: Array2<f64>,
        right: Array2<f64>,
        cfg: &ScoreConfig,
        tag: &str,
    ) -> ScoreMatrix {
        let values = if left.nrows().max(right.nrows()) <= cfg.dense_cap {
            ScoreValues::Dense(left.dot(&right.t()))
        } else {
            ScoreValues::LowRank { left, right }
        };
        ScoreMatrix {
            values,
            horizon: None,
            method_tag: tag.to_string(),
        }
    }

    fn dense(values: Array2<f64>, tag: &str) -> ScoreMatrix {
        ScoreMatrix {
            values: ScoreValues::Dense(values),
            horizon: None,
            method_tag: tag.to_string(),
        }
    }

    pub fn with_horizon(mut self, t: usize) -> ScoreMatrix {
        self.horizon = Some(t);
        self
    }
}

/// Tallies for the per-series model fits behind forecast-based scorers.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct ScoreDiagnostics {
    pub series_fitted: usize,
    /// Series that fell back to their mean after a fit failure.
    pub mean_fallbacks: usize,
    /// Series skipped by the active-pair filter (scored by their mean).
    pub inactive_series: usize,
    /// Fits that degenerated to the null specification after grid failure.
    pub degenerate_fits: usize,
}

impl ScoreDiagnostics {
    /// Merge tallies from another scorer run.
    pub fn absorb(&mut self, other: &ScoreDiagnostics) {
        self.series_fitted += other.series_fitted;
        self.mean_fallbacks += other.mean_fallbacks;
        self.inactive_series += other.inactive_series;
        self.degenerate_fits += other.degenerate_fits;
    }
}

/// ASE (or DASE) of the weighted collapsed matrix.
pub fn score_collapsed(
    series: &SnapshotSeries,
    d: usize,
    weights: &WeightVector,
    cfg: &ScoreConfig,
) -> Result<ScoreMatrix> {
    let collapsed = series.collapse_weighted(weights)?;
    collapsed_scores(&collapsed, series.kind(), d, cfg, "collapsed-avg")
}

fn collapsed_scores(
    matrix: &CsrMatrix,
    kind: GraphKind,
    d: usize,
    cfg: &ScoreConfig,
    tag: &str,
) -> Result<ScoreMatrix> {
    if kind.is_undirected() {
        let e = embed::ase_with(matrix, d, &cfg.spectral)?;
        Ok(ScoreMatrix::from_factors(
            e.positions.clone(),
            e.positions,
            cfg,
            tag,
        ))
    } else {
        let e = embed::dase_with(matrix, d, &cfg.spectral)?;
        Ok(ScoreMatrix::from_factors(e.sources, e.targets, cfg, tag))
    }
}

/// Average of inner products: S = (1/T) Σ_t X̂_tX̂_tᵀ. No alignment is
/// performed; the average of Gram matrices is rotation-invariant.
pub fn score_aip(seq: &EmbeddingSeq, cfg: &ScoreConfig) -> Result<ScoreMatrix> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument("empty embedding sequence".into()));
    }
    let t = seq.len();
    let scale = 1.0 / t as f64;
    let (nl, nr, d) = match seq {
        EmbeddingSeq::Undirected(v) => {
            let p = &v[0].positions;
            (p.nrows(), p.nrows(), p.ncols())
        }
        EmbeddingSeq::Directed(v) => (
            v[0].sources.nrows(),
            v[0].targets.nrows(),
            v[0].sources.ncols(),
        ),
    };
    if nl.max(nr) <= cfg.dense_cap {
        let mut acc = Array2::<f64>::zeros((nl, nr));
        for t0 in 0..t {
            acc += &seq.gram(t0);
        }
        acc *= scale;
        Ok(ScoreMatrix::dense(acc, "aip"))
    } else {
        // factored form: concatenate the per-snapshot factors
        let mut left = Array2::<f64>::zeros((nl, d * t));
        let mut right = Array2::<f64>::zeros((nr, d * t));
        for t0 in 0..t {
            let (l, r) = match seq {
                EmbeddingSeq::Undirected(v) => (&v[t0].positions, &v[t0].positions),
                EmbeddingSeq::Directed(v) => (&v[t0].sources, &v[t0].targets),
            };
            left.slice_mut(ndarray::s![.., t0 * d..(t0 + 1) * d])
                .assign(&(l * scale));
            right
                .slice_mut(ndarray::s![.., t0 * d..(t0 + 1) * d])
                .assign(r);
        }
        Ok(ScoreMatrix {
            values: ScoreValues::LowRank { left, right },
            horizon: None,
            method_tag: "aip".into(),
        })
    }
}

/// GPA-registered embedding sequence, ready for the IPA and IPP scorers.
/// Directed sequences are aligned jointly through their stacked pairs.
#[derive(Debug, Clone)]
pub struct AlignedSeq {
    rotated: Vec<Array2<f64>>,
    /// Row count of the source block; the remainder of each stacked matrix
    /// is the target block (directed sequences only).
    split: Option<usize>,
    pub gpa: Option<GpaResult>,
}

impl AlignedSeq {
    /// Align with generalised Procrustes. Single-element sequences need no
    /// registration.
    pub fn register(seq: &EmbeddingSeq) -> Result<AlignedSeq> {
        let stacked = Self::stack(seq);
        let split = Self::split_of(seq);
        if stacked.len() < 2 {
            return Ok(AlignedSeq {
                rotated: stacked,
                split,
                gpa: None,
            });
        }
        let res = gpa_with(&stacked, GPA_TOL, GPA_MAX_ITER)?;
        Ok(AlignedSeq {
            rotated: res.rotated.clone(),
            split,
            gpa: Some(res),
        })
    }

    /// Adopt embeddings that are already mutually comparable (omnibus).
    pub fn pre_aligned(seq: &EmbeddingSeq) -> AlignedSeq {
        AlignedSeq {
            rotated: Self::stack(seq),
            split: Self::split_of(seq),
            gpa: None,
        }
    }

    fn split_of(seq: &EmbeddingSeq) -> Option<usize> {
        match seq {
            EmbeddingSeq::Undirected(_) => None,
            EmbeddingSeq::Directed(v) => Some(v[0].sources.nrows()),
        }
    }

    fn stack(seq: &EmbeddingSeq) -> Vec<Array2<f64>> {
        match seq {
            EmbeddingSeq::Undirected(v) => v.iter().map(|e| e.positions.clone()).collect(),
            EmbeddingSeq::Directed(v) => v
                .iter()
                .map(|e| crate::align::stack_pair(&e.sources, &e.targets))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rotated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotated.is_empty()
    }

    /// Aligned (possibly stacked) matrices.
    pub fn matrices(&self) -> &[Array2<f64>] {
        &self.rotated
    }

    /// Mean of the aligned matrices.
    pub fn mean(&self) -> Array2<f64> {
        let mut acc = self.rotated[0].clone();
        for m in &self.rotated[1..] {
            acc += m;
        }
        acc / self.rotated.len() as f64
    }

    fn unstack(&self, m: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
        match self.split {
            None => (m.clone(), m.clone()),
            Some(s) => (
                m.slice(ndarray::s![..s, ..]).to_owned(),
                m.slice(ndarray::s![s.., ..]).to_owned(),
            ),
        }
    }
}

/// Inner product of the averaged aligned embedding: S = X̄X̄ᵀ.
pub fn score_ipa(aligned: &AlignedSeq, cfg: &ScoreConfig) -> Result<ScoreMatrix> {
    if aligned.is_empty() {
        return Err(Error::InvalidArgument("empty aligned sequence".into()));
    }
    let mean = aligned.mean();
    let (left, right) = aligned.unstack(&mean);
    Ok(ScoreMatrix::from_factors(left, right, cfg, "ipa"))
}

/// COSIE AIP scores: the average of the per-snapshot probability matrices
/// X̂R̂_tX̂ᵀ.
pub fn score_cosie_aip(c: &CosieDecomposition, cfg: &ScoreConfig) -> Result<ScoreMatrix> {
    if c.weights.is_empty() {
        return Err(Error::InvalidArgument("empty COSIE sequence".into()));
    }
    let (nl, nr) = cosie_shape(c);
    if nl.max(nr) <= cfg.dense_cap {
        let mut acc = c.probabilities(0);
        for t0 in 1..c.weights.len() {
            acc += &c.probabilities(t0);
        }
        acc /= c.weights.len() as f64;
        Ok(ScoreMatrix::dense(acc, "cosie-aip"))
    } else {
        let r_bar = mean_weights(c);
        Ok(cosie_lowrank(c, &r_bar, cfg, "cosie-aip"))
    }
}

/// COSIE IPA scores: S = X̂ R̄ X̂ᵀ with R̄ the averaged weight matrix.
pub fn score_cosie_ipa(c: &CosieDecomposition, cfg: &ScoreConfig) -> Result<ScoreMatrix> {
    if c.weights.is_empty() {
        return Err(Error::InvalidArgument("empty COSIE sequence".into()));
    }
    let r_bar = mean_weights(c);
    let (nl, nr) = cosie_shape(c);
    if nl.max(nr) <= cfg.dense_cap {
        Ok(ScoreMatrix::dense(c.combine(&r_bar), "cosie-ipa"))
    } else {
        Ok(cosie_lowrank(c, &r_bar, cfg, "cosie-ipa"))
    }
}

fn cosie_shape(c: &CosieDecomposition) -> (usize, usize) {
    match &c.basis {
        embed::CosieBasis::Undirected(x) => (x.nrows(), x.nrows()),
        embed::CosieBasis::Directed { left, right } => (left.nrows(), right.nrows()),
    }
}

fn mean_weights(c: &CosieDecomposition) -> Array2<f64> {
    let mut acc = c.weights[0].clone();
    for w in &c.weights[1..] {
        acc += w;
    }
    acc / c.weights.len() as f64
}

fn cosie_lowrank(
    c: &CosieDecomposition,
    r: &Array2<f64>,
    _cfg: &ScoreConfig,
    tag: &str,
) -> ScoreMatrix {
    let (left, right) = match &c.basis {
        embed::CosieBasis::Undirected(x) => (x.dot(r), x.clone()),
        embed::CosieBasis::Directed { left, right } => (left.dot(r), right.clone()),
    };
    ScoreMatrix {
        values: ScoreValues::LowRank { left, right },
        horizon: None,
        method_tag: tag.to_string(),
    }
}

/// Pairs eligible for per-edge forecasting: at least one observed link in
/// the training window. Undirected pairs are listed once with i < j.
pub fn active_pairs(series: &SnapshotSeries) -> Vec<(usize, usize)> {
    let undirected = series.kind().is_undirected();
    let mut seen: std::collections::BTreeSet<(usize, usize)> = Default::default();
    for a in series.snapshots() {
        for (i, j, _) in a.iter() {
            if undirected && i > j {
                continue;
            }
            seen.insert((i, j));
        }
    }
    seen.into_iter().collect()
}

/// Forecast every series in `histories` `horizons` steps ahead with
/// automatic order selection; rows of the output are horizons.
fn forecast_bundle(
    histories: &[Vec<f64>],
    fc: &ForecasterConfig,
    horizons: usize,
) -> (Vec<Vec<f64>>, ScoreDiagnostics) {
    let results: Vec<(Vec<f64>, ScoreDiagnostics)> = histories
        .par_iter()
        .map(|z| {
            let mut diag = ScoreDiagnostics::default();
            let mean = z.iter().sum::<f64>() / z.len().max(1) as f64;
            match auto_sari(z, fc.period, &fc.bounds) {
                Ok(fit) => {
                    if fit.degenerate {
                        diag.degenerate_fits += 1;
                    }
                    match forecast(&fit.model, z, horizons) {
                        Ok(f) => {
                            diag.series_fitted += 1;
                            (f, diag)
                        }
                        Err(_) => {
                            diag.mean_fallbacks += 1;
                            (vec![mean; horizons], diag)
                        }
                    }
                }
                Err(_) => {
                    diag.mean_fallbacks += 1;
                    (vec![mean; horizons], diag)
                }
            }
        })
        .collect();
    let mut diag = ScoreDiagnostics::default();
    let mut out = Vec::with_capacity(results.len());
    for (f, d) in results {
        diag.absorb(&d);
        out.push(f);
    }
    (out, diag)
}

/// Predicted adjacency matrix scores: fit a model on each active binary
/// edge series, place the k-step forecasts in Ã_k, and embed each Ã_k.
pub fn score_predicted_adjacency(
    train: &SnapshotSeries,
    d: usize,
    fc: &ForecasterConfig,
    horizons: usize,
    cfg: &ScoreConfig,
) -> Result<(Vec<ScoreMatrix>, ScoreDiagnostics)> {
    let t = train.t_count();
    let pairs = active_pairs(train);
    if pairs.len() > cfg.series_cap {
        return Err(Error::InfeasibleSize(format!(
            "{} active series exceed the cap of {}",
            pairs.len(),
            cfg.series_cap
        )));
    }
    let undirected = train.kind().is_undirected();
    let mut histories = vec![vec![0.0f64; t]; pairs.len()];
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().copied().enumerate().map(|(k, p)| (p, k)).collect();
    for (t0, a) in train.snapshots().iter().enumerate() {
        for (i, j, _) in a.iter() {
            let key = if undirected && i > j { (j, i) } else { (i, j) };
            if let Some(&k) = index.get(&key) {
                histories[k][t0] = 1.0;
            }
        }
    }
    let (forecasts, diag) = forecast_bundle(&histories, fc, horizons);

    let (nr, nc) = train.shape();
    let mut out = Vec::with_capacity(horizons);
    for h in 0..horizons {
        let mut trips = Vec::with_capacity(pairs.len() * 2);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let v = forecasts[k][h];
            if v != 0.0 {
                trips.push((i, j, v));
                if undirected {
                    trips.push((j, i, v));
                }
            }
        }
        let predicted = CsrMatrix::from_triplets(nr, nc, trips)?;
        let s = collapsed_scores(&predicted, train.kind(), d, cfg, "collapsed-pred")?;
        out.push(s.with_horizon(t + h + 1));
    }
    Ok((out, diag))
}

/// Predicted inner products: fit a model on each pair's score history
/// X̂_tX̂_tᵀ(i, j). Pairs outside the active filter keep their history mean,
/// which coincides with their AIP score.
pub fn score_pip(
    seq: &EmbeddingSeq,
    train: &SnapshotSeries,
    fc: &ForecasterConfig,
    horizons: usize,
    cfg: &ScoreConfig,
) -> Result<(Vec<ScoreMatrix>, ScoreDiagnostics)> {
    let t = seq.len();
    if t == 0 {
        return Err(Error::InvalidArgument("empty embedding sequence".into()));
    }
    let kind = train.kind();
    let (nr, nc) = kind.shape();
    if nr.max(nc) > cfg.dense_cap {
        return Err(Error::InfeasibleSize(
            "per-edge forecasting needs dense score storage".into(),
        ));
    }
    let grams: Vec<Array2<f64>> = (0..t).map(|t0| seq.gram(t0)).collect();
    let all_pairs = kind.pairs();
    if all_pairs.len() > cfg.series_cap {
        return Err(Error::InfeasibleSize(format!(
            "{} candidate series exceed the cap of {}",
            all_pairs.len(),
            cfg.series_cap
        )));
    }
    let active: std::collections::BTreeSet<(usize, usize)> =
        active_pairs(train).into_iter().collect();

    let mut diag = ScoreDiagnostics::default();
    let mut active_list = Vec::new();
    let mut histories = Vec::new();
    // means fill every pair; active pairs are refined by forecasts
    let mut base = vec![Array2::<f64>::zeros((nr, nc)); horizons];
    for &(i, j) in &all_pairs {
        let hist: Vec<f64> = grams.iter().map(|g| g[[i, j]]).collect();
        if active.contains(&(i, j)) {
            active_list.push((i, j));
            histories.push(hist);
        } else {
            diag.inactive_series += 1;
            let mean = hist.iter().sum::<f64>() / hist.len() as f64;
            for b in base.iter_mut() {
                b[[i, j]] = mean;
                if kind.is_undirected() {
                    b[[j, i]] = mean;
                }
            }
        }
    }
    let (forecasts, fdiag) = forecast_bundle(&histories, fc, horizons);
    diag.absorb(&fdiag);
    for (k, &(i, j)) in active_list.iter().enumerate() {
        for (h, b) in base.iter_mut().enumerate() {
            b[[i, j]] = forecasts[k][h];
            if kind.is_undirected() {
                b[[j, i]] = forecasts[k][h];
            }
        }
    }
    let out = base
        .into_iter()
        .enumerate()
        .map(|(h, m)| ScoreMatrix::dense(m, "pip").with_horizon(t + h + 1))
        .collect();
    Ok((out, diag))
}

/// Inner products of forecast embeddings: fit a model per aligned
/// coordinate (i, r), forecast the embedding forward and take its Gram.
pub fn score_ipp_embedding(
    aligned: &AlignedSeq,
    fc: &ForecasterConfig,
    horizons: usize,
    cfg: &ScoreConfig,
) -> Result<(Vec<ScoreMatrix>, ScoreDiagnostics)> {
    let t = aligned.len();
    if t == 0 {
        return Err(Error::InvalidArgument("empty aligned sequence".into()));
    }
    let mats = aligned.matrices();
    let (rows, d) = mats[0].dim();
    let mut histories = Vec::with_capacity(rows * d);
    for i in 0..rows {
        for r in 0..d {
            histories.push(mats.iter().map(|m| m[[i, r]]).collect::<Vec<f64>>());
        }
    }
    let (forecasts, diag) = forecast_bundle(&histories, fc, horizons);
    let mut out = Vec::with_capacity(horizons);
    for h in 0..horizons {
        let mut xt = Array2::<f64>::zeros((rows, d));
        for i in 0..rows {
            for r in 0..d {
                xt[[i, r]] = forecasts[i * d + r][h];
            }
        }
        let (left, right) = aligned.unstack(&xt);
        out.push(ScoreMatrix::from_factors(left, right, cfg, "ipp").with_horizon(t + h + 1));
    }
    Ok((out, diag))
}

/// COSIE IPP scores: forecast each entry of R̂_t and combine with the fixed
/// basis. Cost is independent of the node count.
pub fn score_ipp_cosie(
    c: &CosieDecomposition,
    fc: &ForecasterConfig,
    horizons: usize,
    cfg: &ScoreConfig,
) -> Result<(Vec<ScoreMatrix>, ScoreDiagnostics)> {
    let t = c.weights.len();
    if t == 0 {
        return Err(Error::InvalidArgument("empty COSIE sequence".into()));
    }
    let d = c.weights[0].nrows();
    let dc = c.weights[0].ncols();
    let mut histories = Vec::with_capacity(d * dc);
    for k in 0..d {
        for h in 0..dc {
            histories.push(c.weights.iter().map(|r| r[[k, h]]).collect::<Vec<f64>>());
        }
    }
    let (forecasts, diag) = forecast_bundle(&histories, fc, horizons);
    let (nl, nr) = cosie_shape(c);
    let mut out = Vec::with_capacity(horizons);
    for step in 0..horizons {
        let mut rt = Array2::<f64>::zeros((d, dc));
        for k in 0..d {
            for h in 0..dc {
                rt[[k, h]] = forecasts[k * dc + h][step];
            }
        }
        let s = if nl.max(nr) <= cfg.dense_cap {
            ScoreMatrix::dense(c.combine(&rt), "cosie-ipp")
        } else {
            cosie_lowrank(c, &rt, cfg, "cosie-ipp")
        };
        out.push(s.with_horizon(t + step + 1));
    }
    Ok((out, diag))
}

/// Streaming forgetting-factor state over Gram matrices.
#[derive(Debug, Clone)]
pub struct StreamState {
    scores: Array2<f64>,
    weight: f64,
    lambda: f64,
}

impl StreamState {
    /// State after the first snapshot: w = 1, S = X̂₁X̂₁ᵀ.
    pub fn init(first_gram: Array2<f64>, lambda: f64) -> Result<StreamState> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!(
                "forgetting factor {lambda} outside [0, 1]"
            )));
        }
        Ok(StreamState {
            scores: first_gram,
            weight: 1.0,
            lambda,
        })
    }

    /// One streaming update: w ← λw + 1, S ← (1 − 1/w)S + (1/w)X̂X̂ᵀ.
    pub fn update(&mut self, gram: &Array2<f64>) {
        self.weight = self.lambda * self.weight + 1.0;
        let a = 1.0 / self.weight;
        self.scores.zip_mut_with(gram, |s, &g| {
            *s = (1.0 - a) * *s + a * g;
        });
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn scores(&self) -> &Array2<f64> {
        &self.scores
    }

    pub fn score_matrix(&self) -> ScoreMatrix {
        ScoreMatrix::dense(self.scores.clone(), "stream-ff")
    }
}

/// Common-neighbour heuristics on a single symmetric snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMethod {
    AdamicAdar,
    Jaccard,
}

pub fn baseline_scores(a: &CsrMatrix, method: BaselineMethod) -> Result<ScoreMatrix> {
    if a.nrows() != a.ncols() || !a.is_symmetric(0.0) {
        return Err(Error::NotSymmetric);
    }
    let n = a.nrows();
    let mut out = Array2::<f64>::zeros((n, n));
    let degrees: Vec<usize> = (0..n).map(|i| a.row(i).0.len()).collect();
    for i in 0..n {
        let (ni, _) = a.row(i);
        for j in (i + 1)..n {
            let (nj, _) = a.row(j);
            // merge the two sorted neighbour lists
            let mut inter = 0usize;
            let mut score = 0.0f64;
            let (mut p, mut q) = (0usize, 0usize);
            while p < ni.len() && q < nj.len() {
                match ni[p].cmp(&nj[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        inter += 1;
                        let deg = degrees[ni[p]] as f64;
                        if deg > 1.0 {
                            score += 1.0 / deg.ln();
                        }
                        p += 1;
                        q += 1;
                    }
                }
            }
            let v = match method {
                BaselineMethod::AdamicAdar => score,
                BaselineMethod::Jaccard => {
                    let union = ni.len() + nj.len() - inter;
                    if union == 0 {
                        0.0
                    } else {
                        inter as f64 / union as f64
                    }
                }
            };
            out[[i, j]] = v;
            out[[j, i]] = v;
        }
    }
    let tag = match method {
        BaselineMethod::AdamicAdar => "baseline-aa",
        BaselineMethod::Jaccard => "baseline-jaccard",
    };
    Ok(ScoreMatrix::dense(out, tag))
}

/// Average of per-snapshot baseline matrices over a training window.
pub fn baseline_scores_series(
    series: &SnapshotSeries,
    method: BaselineMethod,
) -> Result<ScoreMatrix> {
    let t = series.t_count();
    if t == 0 {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    let mut acc: Option<Array2<f64>> = None;
    for a in series.snapshots() {
        let s = baseline_scores(a, method)?.to_dense();
        acc = Some(match acc {
            None => s,
            Some(mut prev) => {
                prev += &s;
                prev
            }
        });
    }
    let mut m = acc.unwrap();
    m /= t as f64;
    let tag = match method {
        BaselineMethod::AdamicAdar => "baseline-aa",
        BaselineMethod::Jaccard => "baseline-jaccard",
    };
    Ok(ScoreMatrix::dense(m, tag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{embed_series, EmbedMethod, Embedding, Signature};
    use crate::graph::GraphKindTag;
    use ndarray::arr2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn sym_series(n: usize, per_t: Vec<Vec<(usize, usize)>>) -> SnapshotSeries {
        let snaps = per_t
            .into_iter()
            .map(|pairs| {
                let mut all = pairs.clone();
                all.extend(pairs.iter().map(|&(i, j)| (j, i)));
                CsrMatrix::from_binary_pairs(n, n, all).unwrap()
            })
            .collect();
        SnapshotSeries::from_matrices(GraphKind::Undirected { n }, snaps).unwrap()
    }

    fn random_sym_series(n: usize, t: usize, density: f64, seed: u64) -> SnapshotSeries {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let per_t: Vec<Vec<(usize, usize)>> = (0..t)
            .map(|_| {
                let mut pairs = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.random::<f64>() < density {
                            pairs.push((i, j));
                        }
                    }
                }
                pairs
            })
            .collect();
        sym_series(n, per_t)
    }

    fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        (a - b).iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn collapsed_single_snapshot_equals_ase_gram() {
        let series = sym_series(4, vec![vec![(0, 1), (1, 2), (2, 3)]]);
        let cfg = ScoreConfig::default();
        let s = score_collapsed(&series, 2, &WeightVector::uniform(1), &cfg).unwrap();
        let direct = embed::ase(series.snapshot(0), 2).unwrap().gram();
        assert!(max_abs_diff(&s.to_dense(), &direct) < 1e-10);
    }

    #[test]
    fn collapsed_identical_snapshots_match_single() {
        let per = vec![(0usize, 1usize), (2, 3)];
        let series = sym_series(4, vec![per.clone(), per.clone(), per]);
        let cfg = ScoreConfig::default();
        let s3 = score_collapsed(&series, 2, &WeightVector::uniform(3), &cfg).unwrap();
        let (one, _) = series.split_train_test(1).unwrap();
        let s1 = score_collapsed(&one, 2, &WeightVector::uniform(1), &cfg).unwrap();
        assert!(max_abs_diff(&s3.to_dense(), &s1.to_dense()) < 1e-9);
    }

    #[test]
    fn aip_matches_naive_loop() {
        let series = random_sym_series(6, 3, 0.5, 2);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let cfg = ScoreConfig::default();
        let s = score_aip(&seq, &cfg).unwrap();
        let mut want = Array2::<f64>::zeros((6, 6));
        for t0 in 0..3 {
            want += &seq.gram(t0);
        }
        want /= 3.0;
        assert!(max_abs_diff(&s.to_dense(), &want) < 1e-12);
        // single element: S = gram
        let (head, _) = series.split_train_test(1).unwrap();
        let seq1 = embed_series(&head, 2, EmbedMethod::IndividualAse).unwrap();
        let s1 = score_aip(&seq1, &cfg).unwrap();
        assert!(max_abs_diff(&s1.to_dense(), &seq1.gram(0)) < 1e-13);
    }

    #[test]
    fn aip_invariant_to_per_snapshot_rotations() {
        let series = random_sym_series(5, 3, 0.5, 3);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let cfg = ScoreConfig::default();
        let base = score_aip(&seq, &cfg).unwrap().to_dense();
        // rotate each embedding by a different orthogonal matrix
        let rotated = match &seq {
            EmbeddingSeq::Undirected(v) => EmbeddingSeq::Undirected(
                v.iter()
                    .enumerate()
                    .map(|(k, e)| {
                        let ang = 0.3 + k as f64;
                        let q = arr2(&[[ang.cos(), -ang.sin()], [ang.sin(), ang.cos()]]);
                        Embedding {
                            positions: e.positions.dot(&q),
                            signature: e.signature,
                            snapshot_id: e.snapshot_id,
                        }
                    })
                    .collect(),
            ),
            _ => unreachable!(),
        };
        let turned = score_aip(&rotated, &cfg).unwrap().to_dense();
        assert!(max_abs_diff(&base, &turned) < 1e-10);
    }

    #[test]
    fn aip_lowrank_matches_dense() {
        let series = random_sym_series(8, 3, 0.4, 4);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let dense_cfg = ScoreConfig::default();
        let lazy_cfg = ScoreConfig {
            dense_cap: 4,
            ..ScoreConfig::default()
        };
        let dense = score_aip(&seq, &dense_cfg).unwrap();
        let lazy = score_aip(&seq, &lazy_cfg).unwrap();
        assert!(matches!(lazy.values, ScoreValues::LowRank { .. }));
        for i in 0..8 {
            for j in 0..8 {
                assert!((dense.entry(i, j) - lazy.entry(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ipa_equal_embeddings_reduce_to_single_gram() {
        let per = vec![(0usize, 1usize), (1, 2), (3, 4)];
        let series = sym_series(5, vec![per.clone(), per.clone(), per]);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let aligned = AlignedSeq::register(&seq).unwrap();
        let cfg = ScoreConfig::default();
        let s = score_ipa(&aligned, &cfg).unwrap();
        assert!(max_abs_diff(&s.to_dense(), &seq.gram(0)) < 1e-8);
    }

    #[test]
    fn ipa_recovers_common_latent_positions() {
        // embeddings equal up to rotations: after GPA the score is XXᵀ
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let x = Array2::from_shape_fn((7, 2), |_| rng.random::<f64>());
        let seq = EmbeddingSeq::Undirected(
            (0..4)
                .map(|k| {
                    let ang = 0.7 * k as f64;
                    let q = arr2(&[[ang.cos(), -ang.sin()], [ang.sin(), ang.cos()]]);
                    Embedding {
                        positions: x.dot(&q),
                        signature: Signature::definite(2),
                        snapshot_id: Some(k + 1),
                    }
                })
                .collect(),
        );
        let aligned = AlignedSeq::register(&seq).unwrap();
        let cfg = ScoreConfig::default();
        let s = score_ipa(&aligned, &cfg).unwrap();
        let want = x.dot(&x.t());
        assert!(max_abs_diff(&s.to_dense(), &want) < 1e-6);
    }

    #[test]
    fn ipa_two_matrices_match_pairwise_procrustes_mean() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let x1 = Array2::from_shape_fn((6, 2), |_| rng.random::<f64>());
        let x2 = Array2::from_shape_fn((6, 2), |_| rng.random::<f64>());
        let seq = EmbeddingSeq::Undirected(vec![
            Embedding {
                positions: x1.clone(),
                signature: Signature::definite(2),
                snapshot_id: None,
            },
            Embedding {
                positions: x2.clone(),
                signature: Signature::definite(2),
                snapshot_id: None,
            },
        ]);
        let aligned = AlignedSeq::register(&seq).unwrap();
        let cfg = ScoreConfig::default();
        let s = score_ipa(&aligned, &cfg).unwrap().to_dense();
        // hand-computed: rotate both onto the common GPA frame, average,
        // then gram; equivalently rotate x2 onto x1 and average (two-matrix
        // GPA fixed point), compared through the gram matrices
        let omega = crate::align::procrustes(&x1.view(), &x2.view()).unwrap();
        let mean = (&x1 + &x2.dot(&omega)) / 2.0;
        let want = mean.dot(&mean.t());
        assert!(max_abs_diff(&s, &want) < 1e-6, "{}", max_abs_diff(&s, &want));
    }

    #[test]
    fn cosie_aip_equals_ipa() {
        let series = random_sym_series(7, 4, 0.45, 7);
        let c = embed::mase(&series, 3).unwrap();
        let cfg = ScoreConfig::default();
        let aip = score_cosie_aip(&c, &cfg).unwrap().to_dense();
        let ipa = score_cosie_ipa(&c, &cfg).unwrap().to_dense();
        assert!(max_abs_diff(&aip, &ipa) < 1e-12);
    }

    #[test]
    fn cosie_single_snapshot() {
        let series = random_sym_series(6, 1, 0.5, 8);
        let c = embed::mase(&series, 2).unwrap();
        let cfg = ScoreConfig::default();
        let s = score_cosie_aip(&c, &cfg).unwrap().to_dense();
        assert!(max_abs_diff(&s, &c.probabilities(0)) < 1e-12);
    }

    #[test]
    fn cosie_noiseless_average_matches_mean_adjacency() {
        // A_t with an exactly shared rank-2 column space
        let x = arr2(&[[0.5, 0.5], [0.5, -0.5], [0.5, 0.5], [0.5, -0.5]]);
        let rs = [
            arr2(&[[0.9, 0.0], [0.0, 0.4]]),
            arr2(&[[0.5, 0.1], [0.1, 0.8]]),
        ];
        let mut mats = Vec::new();
        for r in &rs {
            let p = x.dot(r).dot(&x.t());
            let mut trips = Vec::new();
            for i in 0..4 {
                for j in 0..4 {
                    if p[[i, j]] != 0.0 {
                        trips.push((i, j, p[[i, j]]));
                    }
                }
            }
            mats.push(CsrMatrix::from_triplets(4, 4, trips).unwrap());
        }
        // run the COSIE machinery directly over the real-valued inputs
        let gammas: Vec<Array2<f64>> = mats
            .iter()
            .map(|a| crate::spectral::truncated_eig(a, 2).unwrap().vectors)
            .collect();
        let op = crate::spectral::SumOuterOperator::new(&gammas);
        let basis = crate::spectral::truncated_eig_operator(&op, 2, &Options::default())
            .unwrap()
            .vectors;
        let weights: Vec<Array2<f64>> = mats
            .iter()
            .map(|a| {
                let mut ar = Array2::<f64>::zeros((4, 2));
                let mut tmp = vec![0.0; 4];
                for k in 0..2 {
                    let col: Vec<f64> = basis.column(k).to_vec();
                    a.matvec(&col, &mut tmp);
                    for (i, &v) in tmp.iter().enumerate() {
                        ar[[i, k]] = v;
                    }
                }
                basis.t().dot(&ar)
            })
            .collect();
        let c = CosieDecomposition {
            basis: embed::CosieBasis::Undirected(basis),
            weights,
        };
        let cfg = ScoreConfig::default();
        let s = score_cosie_aip(&c, &cfg).unwrap().to_dense();
        let want = (mats[0].to_dense() + mats[1].to_dense()) / 2.0;
        assert!(max_abs_diff(&s, &want) < 1e-8);
    }

    #[test]
    fn predicted_adjacency_constant_series() {
        let per = vec![(0usize, 1usize), (1, 2)];
        let series = sym_series(4, vec![per.clone(), per.clone(), per.clone(), per]);
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 1,
            ..Default::default()
        };
        let (scores, diag) = score_predicted_adjacency(&series, 2, &fc, 2, &cfg).unwrap();
        assert_eq!(scores.len(), 2);
        assert_eq!(diag.series_fitted, 2);
        // constant histories forecast to 1: same scores as the plain ASE
        let want = embed::ase(series.snapshot(0), 2).unwrap().gram();
        for s in &scores {
            assert!(max_abs_diff(&s.to_dense(), &want) < 1e-8);
        }
    }

    #[test]
    fn predicted_adjacency_tracks_seasonal_phase() {
        // edge active every 7th snapshot, in phase with t = 71
        let t = 70;
        let mut per_t = vec![vec![(2usize, 3usize)]; t];
        for (t0, pairs) in per_t.iter_mut().enumerate() {
            if (t0 + 1) % 7 == 1 {
                pairs.push((0, 1));
            }
        }
        let series = sym_series(4, per_t);
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig::default();
        // horizons 1 and 2 are t = 71 (≡ 1 mod 7, active phase) and t = 72
        let (_, diag) = score_predicted_adjacency(&series, 2, &fc, 2, &cfg).unwrap();
        assert!(diag.series_fitted >= 1);
        // inspect the forecast pipeline directly for the (0,1) edge
        let hist: Vec<f64> = (0..t).map(|t0| if (t0 + 1) % 7 == 1 { 1.0 } else { 0.0 }).collect();
        let fit = auto_sari(&hist, 7, &SariBounds::default()).unwrap();
        let f = forecast(&fit.model, &hist, 2).unwrap();
        assert!(f[0] > 0.5 && f[1] < 0.5, "forecasts {f:?}");
        assert!(f[0] > f[1]);
    }

    #[test]
    fn predicted_adjacency_matches_per_entry_oracle() {
        let series = random_sym_series(6, 10, 0.4, 9);
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 3,
            ..Default::default()
        };
        let (scores, _) = score_predicted_adjacency(&series, 2, &fc, 1, &cfg).unwrap();
        // naive oracle: loop over every pair, forecast, assemble dense
        let n = 6;
        let mut pred = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in (i + 1)..n {
                let hist: Vec<f64> = (0..10)
                    .map(|t0| series.snapshot(t0).get(i, j))
                    .collect();
                if hist.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let fit = auto_sari(&hist, 3, &fc.bounds).unwrap();
                let f = forecast(&fit.model, &hist, 1).unwrap()[0];
                pred[[i, j]] = f;
                pred[[j, i]] = f;
            }
        }
        let mut trips = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if pred[[i, j]] != 0.0 {
                    trips.push((i, j, pred[[i, j]]));
                }
            }
        }
        let pm = CsrMatrix::from_triplets(n, n, trips).unwrap();
        let want = embed::ase(&pm, 2).unwrap().gram();
        assert!(max_abs_diff(&scores[0].to_dense(), &want) < 1e-8);
    }

    #[test]
    fn pip_constant_histories_equal_aip() {
        let per = vec![(0usize, 1usize), (2, 3), (1, 2)];
        let series = sym_series(4, vec![per.clone(), per.clone(), per.clone(), per]);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 1,
            ..Default::default()
        };
        let (pip, _) = score_pip(&seq, &series, &fc, 2, &cfg).unwrap();
        let aip = score_aip(&seq, &cfg).unwrap().to_dense();
        // equality holds over the eligible pair space (the diagonal carries
        // no candidate links)
        for s in &pip {
            let sd = s.to_dense();
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!((sd[[i, j]] - aip[[i, j]]).abs() < 1e-9, "({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn pip_matches_per_entry_oracle() {
        let series = random_sym_series(4, 12, 0.5, 10);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 4,
            ..Default::default()
        };
        let (pip, _) = score_pip(&seq, &series, &fc, 1, &cfg).unwrap();
        let grams: Vec<Array2<f64>> = (0..12).map(|t0| seq.gram(t0)).collect();
        let active: std::collections::BTreeSet<_> = active_pairs(&series).into_iter().collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let hist: Vec<f64> = grams.iter().map(|g| g[[i, j]]).collect();
                let want = if active.contains(&(i, j)) {
                    let fit = auto_sari(&hist, 4, &fc.bounds).unwrap();
                    forecast(&fit.model, &hist, 1).unwrap()[0]
                } else {
                    hist.iter().sum::<f64>() / hist.len() as f64
                };
                assert!(
                    (pip[0].entry(i, j) - want).abs() < 1e-10,
                    "pair ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn ipp_constant_embeddings_equal_ipa() {
        let per = vec![(0usize, 1usize), (1, 3)];
        let series = sym_series(4, vec![per.clone(), per.clone(), per.clone(), per]);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let aligned = AlignedSeq::register(&seq).unwrap();
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 1,
            ..Default::default()
        };
        let (ipp, _) = score_ipp_embedding(&aligned, &fc, 2, &cfg).unwrap();
        let ipa = score_ipa(&aligned, &cfg).unwrap().to_dense();
        for s in &ipp {
            assert!(max_abs_diff(&s.to_dense(), &ipa) < 1e-9);
        }
    }

    #[test]
    fn ipp_extrapolates_linear_drift() {
        // one coordinate drifts linearly; the forecast continues the drift
        let base = Array2::from_shape_fn((5, 2), |(i, r)| (i + r) as f64 * 0.1);
        let mats: Vec<Array2<f64>> = (0..8)
            .map(|t| {
                let mut m = base.clone();
                m[[0, 0]] = 0.1 * t as f64;
                m
            })
            .collect();
        let seq = EmbeddingSeq::Undirected(
            mats.into_iter()
                .map(|m| Embedding {
                    positions: m,
                    signature: Signature::definite(2),
                    snapshot_id: None,
                })
                .collect(),
        );
        let aligned = AlignedSeq::pre_aligned(&seq);
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 1,
            ..Default::default()
        };
        let (ipp, _) = score_ipp_embedding(&aligned, &fc, 3, &cfg).unwrap();
        // the self-score of node 0 keeps growing beyond its last value
        let last = aligned.matrices()[7][[0, 0]];
        let f1 = ipp[0].to_dense()[[0, 0]].sqrt();
        let f3 = ipp[2].to_dense()[[0, 0]].sqrt();
        assert!(f1 > last - 1e-9, "f1 = {f1}, last = {last}");
        assert!(f3 > f1, "drift should extend");
    }

    #[test]
    fn ipp_cosie_constant_weights_equal_ipa() {
        let per = vec![(0usize, 2usize), (1, 3)];
        let series = sym_series(4, vec![per.clone(), per.clone(), per]);
        let c = embed::mase(&series, 2).unwrap();
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 1,
            ..Default::default()
        };
        let (ipp, _) = score_ipp_cosie(&c, &fc, 2, &cfg).unwrap();
        let ipa = score_cosie_ipa(&c, &cfg).unwrap().to_dense();
        for s in &ipp {
            assert!(max_abs_diff(&s.to_dense(), &ipa) < 1e-9);
        }
    }

    #[test]
    fn ipp_cosie_matches_entrywise_oracle() {
        let series = random_sym_series(5, 9, 0.5, 11);
        let c = embed::mase(&series, 2).unwrap();
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 3,
            ..Default::default()
        };
        let (ipp, _) = score_ipp_cosie(&c, &fc, 1, &cfg).unwrap();
        let mut rt = Array2::<f64>::zeros((2, 2));
        for k in 0..2 {
            for h in 0..2 {
                let hist: Vec<f64> = c.weights.iter().map(|r| r[[k, h]]).collect();
                let fit = auto_sari(&hist, 3, &fc.bounds).unwrap();
                rt[[k, h]] = forecast(&fit.model, &hist, 1).unwrap()[0];
            }
        }
        let want = c.combine(&rt);
        assert!(max_abs_diff(&ipp[0].to_dense(), &want) < 1e-10);
    }

    #[test]
    fn stream_lambda_one_is_running_mean() {
        let series = random_sym_series(5, 4, 0.5, 12);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let cfg = ScoreConfig::default();
        let mut state = StreamState::init(seq.gram(0), 1.0).unwrap();
        for t0 in 1..4 {
            state.update(&seq.gram(t0));
        }
        let aip = score_aip(&seq, &cfg).unwrap().to_dense();
        assert!(max_abs_diff(state.scores(), &aip) < 1e-10);
    }

    #[test]
    fn stream_lambda_zero_keeps_latest() {
        let series = random_sym_series(5, 3, 0.5, 13);
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let mut state = StreamState::init(seq.gram(0), 0.0).unwrap();
        for t0 in 1..3 {
            state.update(&seq.gram(t0));
            assert!((state.weight() - 1.0).abs() < 1e-15);
        }
        assert!(max_abs_diff(state.scores(), &seq.gram(2)) < 1e-12);
    }

    #[test]
    fn stream_half_lambda_hand_recursion() {
        let g1 = arr2(&[[1.0, 0.0], [0.0, 0.0]]);
        let g2 = arr2(&[[0.0, 1.0], [1.0, 0.0]]);
        let g3 = arr2(&[[0.0, 0.0], [0.0, 1.0]]);
        let mut state = StreamState::init(g1.clone(), 0.5).unwrap();
        state.update(&g2);
        assert!((state.weight() - 1.5).abs() < 1e-15);
        state.update(&g3);
        assert!((state.weight() - 1.75).abs() < 1e-15);
        // hand recursion: S2 = (1/3)g1 + (2/3)g2; S3 = (3/7)S2·... w3 = 1.75
        let s2 = &g1 * (1.0 - 1.0 / 1.5) + &g2 * (1.0 / 1.5);
        let want = &s2 * (1.0 - 1.0 / 1.75) + &g3 * (1.0 / 1.75);
        assert!(max_abs_diff(state.scores(), &want) < 1e-14);
    }

    #[test]
    fn jaccard_triangle_closed_form() {
        let a = {
            let pairs = vec![(0, 1), (1, 2), (0, 2)];
            let mut all = pairs.clone();
            all.extend(pairs.iter().map(|&(i, j)| (j, i)));
            CsrMatrix::from_binary_pairs(3, 3, all).unwrap()
        };
        let s = baseline_scores(&a, BaselineMethod::Jaccard).unwrap().to_dense();
        // N(0) = {1,2}, N(1) = {0,2}: intersection {2}, union {0,1,2}
        assert!((s[[0, 1]] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn adamic_adar_star_center_leaf_is_zero() {
        let pairs = vec![(0, 1), (0, 2), (0, 3)];
        let mut all = pairs.clone();
        all.extend(pairs.iter().map(|&(i, j)| (j, i)));
        let a = CsrMatrix::from_binary_pairs(4, 4, all).unwrap();
        let s = baseline_scores(&a, BaselineMethod::AdamicAdar).unwrap().to_dense();
        assert_eq!(s[[0, 1]], 0.0);
        // two leaves share the hub with degree 3
        assert!((s[[1, 2]] - 1.0 / 3.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn baselines_match_set_oracle() {
        let series = random_sym_series(8, 1, 0.4, 14);
        let a = series.snapshot(0);
        let aa = baseline_scores(a, BaselineMethod::AdamicAdar).unwrap().to_dense();
        let jc = baseline_scores(a, BaselineMethod::Jaccard).unwrap().to_dense();
        let neigh: Vec<std::collections::BTreeSet<usize>> = (0..8)
            .map(|i| a.row(i).0.iter().copied().collect())
            .collect();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let inter: Vec<usize> = neigh[i].intersection(&neigh[j]).copied().collect();
                let union = neigh[i].union(&neigh[j]).count();
                let want_jc = if union == 0 {
                    0.0
                } else {
                    inter.len() as f64 / union as f64
                };
                let want_aa: f64 = inter
                    .iter()
                    .map(|&k| {
                        let d = neigh[k].len() as f64;
                        if d > 1.0 {
                            1.0 / d.ln()
                        } else {
                            0.0
                        }
                    })
                    .sum();
                assert!((jc[[i, j]] - want_jc).abs() < 1e-12);
                assert!((aa[[i, j]] - want_aa).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn undirected_scorers_emit_symmetric_matrices() {
        let series = random_sym_series(6, 5, 0.5, 15);
        let cfg = ScoreConfig::default();
        let fc = ForecasterConfig {
            period: 2,
            ..Default::default()
        };
        let seq = embed_series(&series, 2, EmbedMethod::IndividualAse).unwrap();
        let aligned = AlignedSeq::register(&seq).unwrap();
        let mut mats = vec![
            score_collapsed(&series, 2, &WeightVector::uniform(5), &cfg)
                .unwrap()
                .to_dense(),
            score_aip(&seq, &cfg).unwrap().to_dense(),
            score_ipa(&aligned, &cfg).unwrap().to_dense(),
        ];
        let (pip, _) = score_pip(&seq, &series, &fc, 1, &cfg).unwrap();
        mats.push(pip[0].to_dense());
        let (pred, _) = score_predicted_adjacency(&series, 2, &fc, 1, &cfg).unwrap();
        mats.push(pred[0].to_dense());
        for m in mats {
            assert!(max_abs_diff(&m, &m.t().to_owned()) < 1e-8);
        }
    }

    #[test]
    fn ingest_tag_unused_guard() {
        // GraphKindTag is part of the public ingestion surface
        let _ = GraphKindTag::Undirected;
    }
}
