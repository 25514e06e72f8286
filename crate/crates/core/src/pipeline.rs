//! Experiment orchestration: a single configuration document selects the
//! data source, embedding dimension, scoring method, train/test split and
//! evaluation scheme, with every random draw derived from one root seed.
//!
//! Non-sequential runs score the whole test window from the training
//! snapshots alone (test snapshots are touched only for evaluation labels
//! and for the ever-active augmentation of the second subsampling scheme,
//! which is defined over the full observation window). Sequential runs
//! reveal each test snapshot after scoring it and refit or update the
//! combiner.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::embed::{self, EmbedMethod, EmbeddingSeq};
use crate::error::{Error, Result};
use crate::eval::{
    auc_difference_ci, evaluate_method, DiffInterval, EvalReport, SubsampleScheme,
    SubsampleVariant,
};
use crate::graph::{self, GraphKind, SnapshotSeries, WeightVector};
use crate::score::{
    self, baseline_scores_series, score_aip, score_collapsed, score_cosie_aip, score_cosie_ipa,
    score_ipa, score_ipp_cosie, score_ipp_embedding, score_pip, score_predicted_adjacency,
    AlignedSeq, BaselineMethod, ForecasterConfig, ScoreConfig, ScoreDiagnostics, ScoreMatrix,
    StreamState,
};
use crate::simulate::{self, LogisticDynConfig, SeasonalSbmConfig};
use crate::spectral;

/// Data source of an experiment. Simulator seeds derive from the root seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", rename_all_fields = "kebab-case")]
pub enum DataSource {
    SeasonalSbm {
        n: usize,
        communities: usize,
        t_count: usize,
        period: usize,
        beta_a: f64,
        beta_b: f64,
    },
    LogisticDynamic {
        n: usize,
        t_count: usize,
        theta: f64,
        baseline_low: f64,
        baseline_high: f64,
    },
    Load {
        dir: PathBuf,
    },
}

impl DataSource {
    /// The simulation-study seasonal SBM defaults.
    pub fn sbm_defaults() -> DataSource {
        DataSource::SeasonalSbm {
            n: 100,
            communities: 5,
            t_count: 100,
            period: 7,
            beta_a: 1.2,
            beta_b: 1.2,
        }
    }

    /// The logistic dynamic model defaults for a given trend.
    pub fn logistic_defaults(theta: f64) -> DataSource {
        DataSource::LogisticDynamic {
            n: 100,
            t_count: 100,
            theta,
            baseline_low: -6.9,
            baseline_high: 0.0,
        }
    }
}

/// Embedding dimension: fixed, or selected on the training collapse by the
/// profile-likelihood elbow.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", rename_all_fields = "kebab-case")]
pub enum DimensionChoice {
    Fixed(usize),
    Elbow { max_rank: Option<usize> },
}

impl Default for DimensionChoice {
    fn default() -> Self {
        DimensionChoice::Elbow { max_rank: None }
    }
}

/// Scoring method. Parsed from and serialized as its tag, e.g. `ase-aip`
/// or `stream-ff(0.8)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    CollapsedAvg,
    CollapsedPred,
    AseAip,
    AseIpa,
    AsePip,
    AseIpp,
    OmniAip,
    OmniIpa,
    CosieAip,
    CosieIpa,
    CosieIpp,
    StreamFf { lambda: f64 },
    BaselineAa,
    BaselineJaccard,
}

impl Method {
    pub fn tag(&self) -> String {
        match self {
            Method::CollapsedAvg => "collapsed-avg".into(),
            Method::CollapsedPred => "collapsed-pred".into(),
            Method::AseAip => "ase-aip".into(),
            Method::AseIpa => "ase-ipa".into(),
            Method::AsePip => "ase-pip".into(),
            Method::AseIpp => "ase-ipp".into(),
            Method::OmniAip => "omni-aip".into(),
            Method::OmniIpa => "omni-ipa".into(),
            Method::CosieAip => "cosie-aip".into(),
            Method::CosieIpa => "cosie-ipa".into(),
            Method::CosieIpp => "cosie-ipp".into(),
            Method::StreamFf { lambda } => format!("stream-ff({lambda})"),
            Method::BaselineAa => "baseline-aa".into(),
            Method::BaselineJaccard => "baseline-jaccard".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("stream-ff(").and_then(|r| r.strip_suffix(')')) {
            let lambda: f64 = inner
                .parse()
                .map_err(|_| Error::Config(format!("bad forgetting factor in {s:?}")))?;
            if !(0.0..=1.0).contains(&lambda) {
                return Err(Error::Config(format!(
                    "forgetting factor {lambda} outside [0, 1]"
                )));
            }
            return Ok(Method::StreamFf { lambda });
        }
        match s {
            "collapsed-avg" => Ok(Method::CollapsedAvg),
            "collapsed-pred" => Ok(Method::CollapsedPred),
            "ase-aip" => Ok(Method::AseAip),
            "ase-ipa" => Ok(Method::AseIpa),
            "ase-pip" => Ok(Method::AsePip),
            "ase-ipp" => Ok(Method::AseIpp),
            "omni-aip" => Ok(Method::OmniAip),
            "omni-ipa" => Ok(Method::OmniIpa),
            "cosie-aip" => Ok(Method::CosieAip),
            "cosie-ipa" => Ok(Method::CosieIpa),
            "cosie-ipp" => Ok(Method::CosieIpp),
            "baseline-aa" => Ok(Method::BaselineAa),
            "baseline-jaccard" => Ok(Method::BaselineJaccard),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }

    /// One representative per scorer path, for exhaustiveness checks.
    pub fn all() -> Vec<Method> {
        vec![
            Method::CollapsedAvg,
            Method::CollapsedPred,
            Method::AseAip,
            Method::AseIpa,
            Method::AsePip,
            Method::AseIpp,
            Method::OmniAip,
            Method::OmniIpa,
            Method::CosieAip,
            Method::CosieIpa,
            Method::CosieIpp,
            Method::StreamFf { lambda: 0.9 },
            Method::BaselineAa,
            Method::BaselineJaccard,
        ]
    }

    fn needs_forecaster(&self) -> bool {
        matches!(
            self,
            Method::CollapsedPred | Method::AsePip | Method::AseIpp | Method::CosieIpp
        )
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.tag())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Method::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Evaluation settings; the scheme seed derives from the root seed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct EvalSettings {
    pub variant: SubsampleVariant,
    pub sample_count: Option<usize>,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            variant: SubsampleVariant::UniformZeros,
            sample_count: None,
        }
    }
}

/// One experiment: data × dimension × method × split × evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub data: DataSource,
    #[serde(default)]
    pub dimension: DimensionChoice,
    pub method: Method,
    pub t_prime: usize,
    #[serde(default)]
    pub sequential: bool,
    #[serde(default)]
    pub forecaster: ForecasterConfig,
    #[serde(default)]
    pub eval: EvalSettings,
    pub seed: u64,
}

/// Wall-clock seconds per pipeline stage (reported separately from the
/// deterministic evaluation report).
#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Everything an experiment produces.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRun {
    pub config: ExperimentConfig,
    pub d_used: usize,
    pub report: EvalReport,
    pub diagnostics: ScoreDiagnostics,
    #[serde(skip)]
    pub timings: Vec<StageTiming>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Stable seed derivation: every random draw in an experiment traces back
/// to the root seed through a tagged stream.
pub fn derive_seed(root: u64, tag: u64) -> u64 {
    splitmix64(root ^ splitmix64(tag))
}

const SEED_TAG_DATA: u64 = 1;
const SEED_TAG_EVAL: u64 = 2;

/// Materialize the experiment's data source.
pub fn load_data(cfg: &ExperimentConfig) -> Result<SnapshotSeries> {
    match &cfg.data {
        DataSource::SeasonalSbm {
            n,
            communities,
            t_count,
            period,
            beta_a,
            beta_b,
        } => {
            let sim = SeasonalSbmConfig {
                n: *n,
                communities: *communities,
                t_count: *t_count,
                period: *period,
                beta_a: *beta_a,
                beta_b: *beta_b,
                seed: derive_seed(cfg.seed, SEED_TAG_DATA),
            };
            Ok(simulate::seasonal_sbm(&sim)?.0)
        }
        DataSource::LogisticDynamic {
            n,
            t_count,
            theta,
            baseline_low,
            baseline_high,
        } => {
            let sim = LogisticDynConfig {
                n: *n,
                t_count: *t_count,
                theta: *theta,
                baseline_low: *baseline_low,
                baseline_high: *baseline_high,
                seed: derive_seed(cfg.seed, SEED_TAG_DATA),
            };
            Ok(simulate::logistic_dynamic(&sim)?.0)
        }
        DataSource::Load { dir } => graph::load_series(dir),
    }
}

/// Check the method/graph-kind combination before any heavy compute.
fn validate(cfg: &ExperimentConfig, series: &SnapshotSeries) -> Result<()> {
    let t = series.t_count();
    if cfg.t_prime == 0 || cfg.t_prime >= t {
        return Err(Error::Config(format!(
            "t_prime = {} outside 1..{}",
            cfg.t_prime,
            t - 1
        )));
    }
    let kind = series.kind();
    match cfg.method {
        Method::BaselineAa | Method::BaselineJaccard if !kind.is_undirected() => {
            Err(Error::Config(
                "common-neighbour baselines need an undirected graph".into(),
            ))
        }
        Method::OmniAip | Method::OmniIpa => {
            let (nr, nc) = kind.shape();
            if nr.max(nc) * cfg.t_prime > embed::DEFAULT_OMNIBUS_ROW_CAP {
                Err(Error::Config(format!(
                    "omnibus matrix would exceed {} rows",
                    embed::DEFAULT_OMNIBUS_ROW_CAP
                )))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

/// Embedding dimension resolution on the training window.
pub fn resolve_dimension(train: &SnapshotSeries, choice: DimensionChoice) -> Result<usize> {
    let (nr, nc) = train.shape();
    let dim_cap = nr.min(nc);
    match choice {
        DimensionChoice::Fixed(d) => {
            if d == 0 || d > dim_cap {
                Err(Error::Config(format!("d = {d} outside 1..{dim_cap}")))
            } else {
                Ok(d)
            }
        }
        DimensionChoice::Elbow { max_rank } => {
            let cap = max_rank.unwrap_or(nr.min(50)).min(dim_cap);
            if cap < 3 {
                return Err(Error::Config(
                    "elbow selection needs a scan rank of at least 3".into(),
                ));
            }
            let avg = train.collapse_weighted(&WeightVector::uniform(train.t_count()))?;
            let values: Vec<f64> = if train.kind().is_undirected() {
                spectral::truncated_eig(&avg, cap)?
                    .values
                    .iter()
                    .map(|v| v.abs())
                    .collect()
            } else {
                spectral::truncated_svd(&avg, cap)?.s
            };
            spectral::select_dim_elbow(&values, cap)
        }
    }
}

fn embed_method_for(kind: GraphKind) -> EmbedMethod {
    if kind.is_undirected() {
        EmbedMethod::IndividualAse
    } else {
        EmbedMethod::IndividualDase
    }
}

/// Score the whole test window from the training snapshots alone.
/// Averaging methods return one matrix reused for every horizon.
pub fn batch_scores(
    train: &SnapshotSeries,
    d: usize,
    method: Method,
    fc: &ForecasterConfig,
    horizons: usize,
    cfg: &ScoreConfig,
) -> Result<(Vec<ScoreMatrix>, ScoreDiagnostics)> {
    let t = train.t_count();
    let replicate = |s: ScoreMatrix| -> Vec<ScoreMatrix> {
        (0..horizons).map(|h| s.clone().with_horizon(t + h + 1)).collect()
    };
    let mut diag = ScoreDiagnostics::default();
    let scores = match method {
        Method::CollapsedAvg => replicate(score_collapsed(
            train,
            d,
            &WeightVector::uniform(t),
            cfg,
        )?),
        Method::CollapsedPred => {
            let (s, dg) = score_predicted_adjacency(train, d, fc, horizons, cfg)?;
            diag = dg;
            s
        }
        Method::AseAip => {
            let seq = embed_series_cfg(train, d, cfg)?;
            replicate(score_aip(&seq, cfg)?)
        }
        Method::AseIpa => {
            let seq = embed_series_cfg(train, d, cfg)?;
            let aligned = AlignedSeq::register(&seq)?;
            replicate(score_ipa(&aligned, cfg)?)
        }
        Method::AsePip => {
            let seq = embed_series_cfg(train, d, cfg)?;
            let (s, dg) = score_pip(&seq, train, fc, horizons, cfg)?;
            diag = dg;
            s
        }
        Method::AseIpp => {
            let seq = embed_series_cfg(train, d, cfg)?;
            let aligned = AlignedSeq::register(&seq)?;
            let (s, dg) = score_ipp_embedding(&aligned, fc, horizons, cfg)?;
            diag = dg;
            s
        }
        Method::OmniAip => {
            let seq = embed::omnibus_with(train, d, &cfg.spectral, embed::DEFAULT_OMNIBUS_ROW_CAP)?;
            replicate(score_aip(&seq, cfg)?)
        }
        Method::OmniIpa => {
            let seq = embed::omnibus_with(train, d, &cfg.spectral, embed::DEFAULT_OMNIBUS_ROW_CAP)?;
            // omnibus embeddings are directly comparable: no alignment step
            let aligned = AlignedSeq::pre_aligned(&seq);
            replicate(score_ipa(&aligned, cfg)?)
        }
        Method::CosieAip => {
            let c = embed::mase_with(train, d, &cfg.spectral)?;
            replicate(score_cosie_aip(&c, cfg)?)
        }
        Method::CosieIpa => {
            let c = embed::mase_with(train, d, &cfg.spectral)?;
            replicate(score_cosie_ipa(&c, cfg)?)
        }
        Method::CosieIpp => {
            let c = embed::mase_with(train, d, &cfg.spectral)?;
            let (s, dg) = score_ipp_cosie(&c, fc, horizons, cfg)?;
            diag = dg;
            s
        }
        Method::StreamFf { lambda } => {
            let seq = embed_series_cfg(train, d, cfg)?;
            let mut state = StreamState::init(seq.gram(0), lambda)?;
            for t0 in 1..seq.len() {
                state.update(&seq.gram(t0));
            }
            replicate(state.score_matrix())
        }
        Method::BaselineAa => replicate(baseline_scores_series(train, BaselineMethod::AdamicAdar)?),
        Method::BaselineJaccard => {
            replicate(baseline_scores_series(train, BaselineMethod::Jaccard)?)
        }
    };
    Ok((scores, diag))
}

fn embed_series_cfg(series: &SnapshotSeries, d: usize, cfg: &ScoreConfig) -> Result<EmbeddingSeq> {
    embed::embed_series_with(series, d, embed_method_for(series.kind()), &cfg.spectral)
}

/// Sequential scoring: each test snapshot is scored one step ahead from
/// everything revealed so far, then revealed. The running-mean methods are
/// updated incrementally; the rest refit on the extended window.
fn sequential_scores(
    series: &SnapshotSeries,
    t_prime: usize,
    d: usize,
    method: Method,
    fc: &ForecasterConfig,
    cfg: &ScoreConfig,
) -> Result<(Vec<ScoreMatrix>, ScoreDiagnostics)> {
    let t = series.t_count();
    let mut diag = ScoreDiagnostics::default();
    let mut out = Vec::with_capacity(t - t_prime);
    match method {
        Method::AseAip | Method::StreamFf { .. } => {
            let lambda = match method {
                Method::StreamFf { lambda } => lambda,
                _ => 1.0, // the sequential AIP is the λ = 1 running mean
            };
            let mut state: Option<StreamState> = None;
            let mut next_to_embed = 0usize;
            for step in t_prime..t {
                while next_to_embed < step {
                    let prefix = prefix_series(series, next_to_embed + 1)?;
                    let seq = embed_series_cfg(&prefix, d, cfg)?;
                    let gram = seq.gram(next_to_embed);
                    state = Some(match state.take() {
                        None => StreamState::init(gram, lambda)?,
                        Some(mut s) => {
                            s.update(&gram);
                            s
                        }
                    });
                    next_to_embed += 1;
                }
                let tag = method.tag();
                let mut s = state.as_ref().expect("at least one snapshot").score_matrix();
                s.method_tag = tag;
                out.push(s.with_horizon(step + 1));
            }
        }
        _ => {
            for step in t_prime..t {
                let window = prefix_series(series, step)?;
                let (mut scores, dg) = batch_scores(&window, d, method, fc, 1, cfg)?;
                diag.absorb(&dg);
                out.push(scores.remove(0).with_horizon(step + 1));
            }
        }
    }
    Ok((out, diag))
}

/// First `k` snapshots as their own series (shared node indexing).
fn prefix_series(series: &SnapshotSeries, k: usize) -> Result<SnapshotSeries> {
    if k == series.t_count() {
        return Ok(series.clone());
    }
    Ok(series.split_train_test(k)?.0)
}

/// Run one experiment end to end.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    let mut timings = Vec::new();
    let clock = Instant::now();
    let series = load_data(cfg)?;
    timings.push(StageTiming {
        stage: "data".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });
    validate(cfg, &series)?;
    if cfg.method.needs_forecaster() && cfg.forecaster.period == 0 {
        return Err(Error::Config("forecaster period must be >= 1".into()));
    }

    let clock = Instant::now();
    let (train, _) = series.split_train_test(cfg.t_prime)?;
    let d = resolve_dimension(&train, cfg.dimension)?;
    timings.push(StageTiming {
        stage: "dimension".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let clock = Instant::now();
    let score_cfg = ScoreConfig::default();
    let horizons = series.t_count() - cfg.t_prime;
    let (scores, diagnostics) = if cfg.sequential {
        sequential_scores(&series, cfg.t_prime, d, cfg.method, &cfg.forecaster, &score_cfg)?
    } else {
        batch_scores(&train, d, cfg.method, &cfg.forecaster, horizons, &score_cfg)?
    };
    timings.push(StageTiming {
        stage: "scores".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let clock = Instant::now();
    let scheme = SubsampleScheme {
        variant: cfg.eval.variant,
        sample_count: cfg.eval.sample_count,
        seed: derive_seed(cfg.seed, SEED_TAG_EVAL),
    };
    let report = evaluate_method(&scores, &series, cfg.t_prime, &scheme, &cfg.method.tag())?;
    timings.push(StageTiming {
        stage: "evaluate".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    Ok(ExperimentRun {
        config: cfg.clone(),
        d_used: d,
        report,
        diagnostics,
        timings,
    })
}

/// Artifact switches for [`run_experiment_to_dir`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ArtifactFlags {
    pub save_series: bool,
    pub save_scores: bool,
}

/// Run an experiment and persist its outputs under `out_dir`: the
/// deterministic `report.json` and `auc.csv`, the wall-clock `timings.json`,
/// and optional data/score artifacts.
pub fn run_experiment_to_dir(
    cfg: &ExperimentConfig,
    out_dir: impl AsRef<Path>,
    flags: ArtifactFlags,
) -> Result<ExperimentRun> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir)?;
    let run = run_experiment(cfg)?;
    let report_file = std::fs::File::create(out_dir.join("report.json"))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(report_file), &run)?;
    let mut csv = String::from("t,auc\n");
    for e in &run.report.per_snapshot {
        csv.push_str(&format!("{},{}\n", e.t, e.auc));
    }
    std::fs::write(out_dir.join("auc.csv"), csv)?;
    let timing_file = std::fs::File::create(out_dir.join("timings.json"))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(timing_file), &run.timings)?;
    if flags.save_series {
        let series = load_data(cfg)?;
        graph::save_series(&series, out_dir.join("series"))?;
    }
    if flags.save_scores {
        // recompute on the training window for persistence
        let series = load_data(cfg)?;
        let (train, _) = series.split_train_test(cfg.t_prime)?;
        let d = run.d_used;
        let horizons = series.t_count() - cfg.t_prime;
        let (scores, _) = if cfg.sequential {
            sequential_scores(
                &series,
                cfg.t_prime,
                d,
                cfg.method,
                &cfg.forecaster,
                &ScoreConfig::default(),
            )?
        } else {
            batch_scores(
                &train,
                d,
                cfg.method,
                &cfg.forecaster,
                horizons,
                &ScoreConfig::default(),
            )?
        };
        save_score_matrices(out_dir.join("scores"), &scores)?;
    }
    Ok(run)
}

#[derive(Serialize, Deserialize)]
struct ScoresManifest {
    n_rows: usize,
    n_cols: usize,
    count: usize,
    method_tag: String,
    horizons: Vec<Option<usize>>,
}

/// Persist score matrices in the binary matrix format.
pub fn save_score_matrices(dir: impl AsRef<Path>, scores: &[ScoreMatrix]) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    if scores.is_empty() {
        return Err(Error::InvalidArgument("no score matrices to save".into()));
    }
    let (nr, nc) = scores[0].shape();
    let manifest = ScoresManifest {
        n_rows: nr,
        n_cols: nc,
        count: scores.len(),
        method_tag: scores[0].method_tag.clone(),
        horizons: scores.iter().map(|s| s.horizon).collect(),
    };
    let f = std::fs::File::create(dir.join("manifest.json"))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(f), &manifest)?;
    for (k, s) in scores.iter().enumerate() {
        embed::matio::write_matrix(dir.join(format!("scores_{:05}.bin", k + 1)), &s.to_dense())?;
    }
    Ok(())
}

/// Load score matrices previously saved by [`save_score_matrices`].
pub fn load_score_matrices(dir: impl AsRef<Path>) -> Result<Vec<ScoreMatrix>> {
    let dir = dir.as_ref();
    let manifest: ScoresManifest = serde_json::from_reader(std::io::BufReader::new(
        std::fs::File::open(dir.join("manifest.json"))?,
    ))?;
    let mut out = Vec::with_capacity(manifest.count);
    for k in 0..manifest.count {
        let m = embed::matio::read_matrix(
            dir.join(format!("scores_{:05}.bin", k + 1)),
            manifest.n_rows,
            manifest.n_cols,
        )?;
        out.push(ScoreMatrix {
            values: score::ScoreValues::Dense(m),
            horizon: manifest.horizons[k],
            method_tag: manifest.method_tag.clone(),
        });
    }
    Ok(out)
}

/// Dump scores for a requested pair set as `i j score` lines.
pub fn dump_score_triplets(
    mut w: impl std::io::Write,
    scores: &ScoreMatrix,
    pairs: &[(usize, usize)],
) -> Result<()> {
    for &(i, j) in pairs {
        writeln!(w, "{} {} {}", i, j, scores.entry(i, j))?;
    }
    Ok(())
}

/// Comparison of several methods against a shared reference on one data
/// set, with paired repeated-subsampling confidence intervals.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub reference: String,
    pub repetitions: usize,
    pub level: f64,
    pub comparisons: Vec<MethodComparison>,
}

/// Per-snapshot intervals for AUC(method) − AUC(reference).
#[derive(Debug, Clone, Serialize)]
pub struct MethodComparison {
    pub method: String,
    pub intervals: Vec<DiffInterval>,
}

/// Run the reference configuration and each alternative method on the same
/// data and evaluation draws, and report difference CIs per snapshot.
pub fn compare_methods(
    base: &ExperimentConfig,
    others: &[Method],
    repetitions: usize,
    level: f64,
) -> Result<CompareReport> {
    let series = load_data(base)?;
    validate(base, &series)?;
    let (train, _) = series.split_train_test(base.t_prime)?;
    let d = resolve_dimension(&train, base.dimension)?;
    let score_cfg = ScoreConfig::default();
    let horizons = series.t_count() - base.t_prime;
    let scheme = SubsampleScheme {
        variant: base.eval.variant,
        sample_count: base.eval.sample_count,
        seed: derive_seed(base.seed, SEED_TAG_EVAL),
    };

    let scores_for = |method: Method| -> Result<Vec<ScoreMatrix>> {
        let run = if base.sequential {
            sequential_scores(&series, base.t_prime, d, method, &base.forecaster, &score_cfg)?
        } else {
            batch_scores(&train, d, method, &base.forecaster, horizons, &score_cfg)?
        };
        Ok(run.0)
    };

    let reference_scores = scores_for(base.method)?;
    let mut comparisons = Vec::with_capacity(others.len());
    for &method in others {
        let other_scores = scores_for(method)?;
        let intervals = auc_difference_ci(
            &other_scores,
            &reference_scores,
            &series,
            base.t_prime,
            &scheme,
            repetitions,
            level,
        )?;
        comparisons.push(MethodComparison {
            method: method.tag(),
            intervals,
        });
    }
    Ok(CompareReport {
        reference: base.method.tag(),
        repetitions,
        level,
        comparisons,
    })
}
