use linkpred_core::pipeline::*;
use linkpred_core::score::ForecasterConfig;

fn main() {
    for seed in 1u64..=10 {
        let base = ExperimentConfig {
            data: DataSource::sbm_defaults(),
            dimension: DimensionChoice::Elbow { max_rank: None },
            method: Method::CollapsedAvg,
            t_prime: 80,
            sequential: false,
            forecaster: ForecasterConfig { period: 7, ..Default::default() },
            eval: EvalSettings::default(),
            seed,
        };
        let col = run_experiment(&base).unwrap();
        let aip = run_experiment(&ExperimentConfig { method: Method::AseAip, ..base.clone() }).unwrap();
        println!("seed {seed}: d {} collapsed {:.4} aip {:.4} aip>col {}",
            col.d_used, col.report.mean_auc, aip.report.mean_auc,
            aip.report.mean_auc > col.report.mean_auc);
    }
}
