//! Command-line driver for temporal link prediction experiments: simulate
//! dynamic networks, embed snapshot series, compute link scores, evaluate
//! predictions and compare scoring methods.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use linkpred_core::embed::{self, EmbedMethod};
use linkpred_core::eval::{evaluate_method, SubsampleScheme, SubsampleVariant};
use linkpred_core::graph;
use linkpred_core::pipeline::{
    self, batch_scores, compare_methods, resolve_dimension, run_experiment_to_dir, ArtifactFlags,
    DimensionChoice, ExperimentConfig, Method,
};
use linkpred_core::score::{ForecasterConfig, ScoreConfig};
use linkpred_core::simulate::{self, LogisticDynConfig, SeasonalSbmConfig};

#[derive(Parser)]
#[command(
    name = "linkpred",
    about = "Temporal link prediction for dynamic networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic snapshot series with ground truth.
    Simulate(SimulateArgs),
    /// Embed a stored snapshot series.
    Embed(EmbedArgs),
    /// Compute link-score matrices for a stored series.
    Score(ScoreArgs),
    /// Evaluate stored score matrices against a stored series.
    Evaluate(EvaluateArgs),
    /// Run a full experiment from a config file.
    Experiment(ExperimentArgs),
    /// Compare several methods on one experiment design.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Generative model: seasonal-sbm or logistic.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Number of communities (seasonal-sbm).
    #[arg(long, default_value_t = 5)]
    communities: usize,
    #[arg(long, default_value_t = 100)]
    t_count: usize,
    /// Seasonal period (seasonal-sbm).
    #[arg(long, default_value_t = 7)]
    period: usize,
    #[arg(long, default_value_t = 1.2)]
    beta_a: f64,
    #[arg(long, default_value_t = 1.2)]
    beta_b: f64,
    /// Trend parameter (logistic).
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = -6.9)]
    baseline_low: f64,
    #[arg(long, default_value_t = 0.0)]
    baseline_high: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    /// Directory holding a serialized snapshot series.
    #[arg(long)]
    series: PathBuf,
    /// individual-ase, individual-dase or omnibus.
    #[arg(long)]
    method: String,
    /// Fixed embedding dimension; omit to select by the elbow criterion.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    series: PathBuf,
    /// Scoring method tag, e.g. ase-aip or stream-ff(0.8).
    #[arg(long)]
    method: String,
    #[arg(long)]
    d: Option<usize>,
    /// Training window length.
    #[arg(long)]
    t_prime: usize,
    /// Seasonal period for the forecast-based methods.
    #[arg(long, default_value_t = 7)]
    forecaster_period: usize,
    /// Optional pair file (lines `i j`); triplet dumps are written per
    /// horizon instead of binary matrices.
    #[arg(long)]
    pairs: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    series: PathBuf,
    /// Directory of score matrices written by `score`.
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    t_prime: usize,
    /// uniform-zeros or zeros-plus-ever-active.
    #[arg(long, default_value = "uniform-zeros")]
    scheme: String,
    #[arg(long)]
    sample_count: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Report file; a CSV with the same stem is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML or JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Root seed (overrides the config's seed).
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long)]
    save_series: bool,
    #[arg(long)]
    save_scores: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// TOML or JSON comparison configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(serde::Deserialize)]
struct CompareConfig {
    experiment: ExperimentConfig,
    methods: Vec<String>,
    #[serde(default = "default_repetitions")]
    repetitions: usize,
    #[serde(default = "default_level")]
    level: f64,
}

fn default_repetitions() -> usize {
    100
}

fn default_level() -> f64 {
    0.95
}

fn parse_scheme(name: &str, sample_count: Option<usize>, seed: u64) -> anyhow::Result<SubsampleScheme> {
    let variant = match name {
        "uniform-zeros" => SubsampleVariant::UniformZeros,
        "zeros-plus-ever-active" => SubsampleVariant::ZerosPlusEverActive,
        other => bail!("unknown subsampling scheme {other:?}"),
    };
    Ok(SubsampleScheme {
        variant,
        sample_count,
        seed,
    })
}

fn read_config<T: serde::de::DeserializeOwned>(path: &PathBuf) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(toml::from_str(&text)?)
    }
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => simulate_cmd(args),
        Command::Embed(args) => embed_cmd(args),
        Command::Score(args) => score_cmd(args),
        Command::Evaluate(args) => evaluate_cmd(args),
        Command::Experiment(args) => experiment_cmd(args),
        Command::Compare(args) => compare_cmd(args),
    }
}

fn simulate_cmd(args: SimulateArgs) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out_dir)?;
    match args.model.as_str() {
        "seasonal-sbm" => {
            let cfg = SeasonalSbmConfig {
                n: args.n,
                communities: args.communities,
                t_count: args.t_count,
                period: args.period,
                beta_a: args.beta_a,
                beta_b: args.beta_b,
                seed: args.seed,
            };
            let (series, truth) = simulate::seasonal_sbm(&cfg)?;
            graph::save_series(&series, &args.out_dir)?;
            let f = std::fs::File::create(args.out_dir.join("ground_truth.json"))?;
            serde_json::to_writer_pretty(std::io::BufWriter::new(f), &truth)?;
        }
        "logistic" => {
            let cfg = LogisticDynConfig {
                n: args.n,
                t_count: args.t_count,
                theta: args.theta,
                baseline_low: args.baseline_low,
                baseline_high: args.baseline_high,
                seed: args.seed,
            };
            let (series, truth) = simulate::logistic_dynamic(&cfg)?;
            graph::save_series(&series, &args.out_dir)?;
            let f = std::fs::File::create(args.out_dir.join("ground_truth.json"))?;
            serde_json::to_writer_pretty(std::io::BufWriter::new(f), &truth)?;
        }
        other => bail!("unknown model {other:?} (expected seasonal-sbm or logistic)"),
    }
    println!("wrote series to {}", args.out_dir.display());
    Ok(())
}

fn embed_cmd(args: EmbedArgs) -> anyhow::Result<()> {
    let series = graph::load_series(&args.series)?;
    let method = match args.method.as_str() {
        "individual-ase" => EmbedMethod::IndividualAse,
        "individual-dase" => EmbedMethod::IndividualDase,
        "omnibus" => EmbedMethod::Omnibus,
        other => bail!("unknown embedding method {other:?}"),
    };
    let d = match args.d {
        Some(d) => d,
        None => resolve_dimension(&series, DimensionChoice::Elbow { max_rank: None })?,
    };
    let seq = embed::embed_series(&series, d, method)?;
    embed::save_embeddings(&args.out_dir, &seq, method)?;
    println!(
        "embedded {} snapshots at d = {d} into {}",
        seq.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn score_cmd(args: ScoreArgs) -> anyhow::Result<()> {
    let series = graph::load_series(&args.series)?;
    let method = Method::parse(&args.method)?;
    let (train, _) = series.split_train_test(args.t_prime)?;
    let d = match args.d {
        Some(d) => d,
        None => resolve_dimension(&train, DimensionChoice::Elbow { max_rank: None })?,
    };
    let horizons = series.t_count() - args.t_prime;
    let fc = ForecasterConfig {
        period: args.forecaster_period,
        ..Default::default()
    };
    let (scores, diag) = batch_scores(&train, d, method, &fc, horizons, &ScoreConfig::default())?;
    std::fs::create_dir_all(&args.out_dir)?;
    match &args.pairs {
        Some(pair_file) => {
            let pairs = read_pairs(pair_file)?;
            for (k, s) in scores.iter().enumerate() {
                let f = std::fs::File::create(args.out_dir.join(format!("scores_{:05}.txt", k + 1)))?;
                pipeline::dump_score_triplets(std::io::BufWriter::new(f), s, &pairs)?;
            }
        }
        None => pipeline::save_score_matrices(&args.out_dir, &scores)?,
    }
    println!(
        "wrote {} score matrices (fitted {} series, {} mean fallbacks)",
        scores.len(),
        diag.series_fitted,
        diag.mean_fallbacks
    );
    Ok(())
}

fn read_pairs(path: &PathBuf) -> anyhow::Result<Vec<(usize, usize)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (line0, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut it = t.split_whitespace();
        let parse = |tok: Option<&str>| -> anyhow::Result<usize> {
            tok.and_then(|s| s.parse().ok())
                .with_context(|| format!("bad pair at line {}", line0 + 1))
        };
        out.push((parse(it.next())?, parse(it.next())?));
    }
    Ok(out)
}

fn evaluate_cmd(args: EvaluateArgs) -> anyhow::Result<()> {
    let series = graph::load_series(&args.series)?;
    let scores = pipeline::load_score_matrices(&args.scores)?;
    let scheme = parse_scheme(&args.scheme, args.sample_count, args.seed)?;
    let tag = scores
        .first()
        .map(|s| s.method_tag.clone())
        .unwrap_or_else(|| "scores".into());
    let report = evaluate_method(&scores, &series, args.t_prime, &scheme, &tag)?;
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let f = std::fs::File::create(&args.out)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(f), &report)?;
    let csv_path = args.out.with_extension("csv");
    let mut csv = String::from("t,auc\n");
    for e in &report.per_snapshot {
        csv.push_str(&format!("{},{}\n", e.t, e.auc));
    }
    std::fs::write(&csv_path, csv)?;
    println!(
        "mean AUC {:.4} over {} snapshots -> {}",
        report.mean_auc,
        report.per_snapshot.len(),
        args.out.display()
    );
    Ok(())
}

fn experiment_cmd(args: ExperimentArgs) -> anyhow::Result<()> {
    let mut cfg: ExperimentConfig = read_config(&args.config)?;
    cfg.seed = args.seed;
    let flags = ArtifactFlags {
        save_series: args.save_series,
        save_scores: args.save_scores,
    };
    let run = run_experiment_to_dir(&cfg, &args.out_dir, flags)?;
    println!(
        "method {} (d = {}): mean AUC {:.4} -> {}",
        run.report.method_tag,
        run.d_used,
        run.report.mean_auc,
        args.out_dir.display()
    );
    Ok(())
}

fn compare_cmd(args: CompareArgs) -> anyhow::Result<()> {
    let mut cfg: CompareConfig = read_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.experiment.seed = seed;
    }
    let methods = cfg
        .methods
        .iter()
        .map(|m| Method::parse(m).map_err(anyhow::Error::from))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let report = compare_methods(&cfg.experiment, &methods, cfg.repetitions, cfg.level)?;
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let f = std::fs::File::create(&args.out)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(f), &report)?;
    for c in &report.comparisons {
        let wins = c
            .intervals
            .iter()
            .filter(|it| it.lower > 0.0)
            .count();
        println!(
            "{} vs {}: interval above 0 on {}/{} snapshots",
            c.method,
            report.reference,
            wins,
            c.intervals.len()
        );
    }
    println!("wrote {}", args.out.display());
    Ok(())
}
