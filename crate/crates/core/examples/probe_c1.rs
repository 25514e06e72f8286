use linkpred_core::pipeline::*;
use linkpred_core::score::ForecasterConfig;

fn main() {
    let t0 = std::time::Instant::now();
    for seed in [101u64, 202] {
        let base = ExperimentConfig {
            data: DataSource::sbm_defaults(),
            dimension: DimensionChoice::Fixed(5),
            method: Method::CollapsedAvg,
            t_prime: 80,
            sequential: false,
            forecaster: ForecasterConfig { period: 7, ..Default::default() },
            eval: EvalSettings::default(),
            seed,
        };
        let mut results = Vec::new();
        for method in [Method::CollapsedAvg, Method::AseAip, Method::AsePip] {
            let cfg = ExperimentConfig { method, ..base.clone() };
            let run = run_experiment(&cfg).unwrap();
            results.push((method.tag(), run.report.mean_auc));
        }
        println!("seed {seed}: {:?}  elapsed {:?}", results, t0.elapsed());
    }
}
