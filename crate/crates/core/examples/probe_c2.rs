use linkpred_core::pipeline::*;
use linkpred_core::score::ForecasterConfig;

fn lsq_slope(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym: f64 = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (k, v) in y.iter().enumerate() {
        let dx = k as f64 - xm;
        sxy += dx * (v - ym);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    // standard error of the slope
    let resid_ss: f64 = y
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let fit = ym + slope * (k as f64 - xm);
            (v - fit).powi(2)
        })
        .sum();
    let se = (resid_ss / (n - 2.0) / sxx).sqrt();
    (slope, se)
}

fn main() {
    let t0 = std::time::Instant::now();
    for theta in [0.075f64, 0.0] {
        for seed in [11u64] {
            let base = ExperimentConfig {
                data: DataSource::logistic_defaults(theta),
                dimension: DimensionChoice::Fixed(5),
                method: Method::AseAip,
                t_prime: 80,
                sequential: false,
                forecaster: ForecasterConfig { period: 7, ..Default::default() },
                eval: EvalSettings::default(),
                seed,
            };
            let nonseq = run_experiment(&base).unwrap();
            let seq = run_experiment(&ExperimentConfig { sequential: true, ..base.clone() }).unwrap();
            let pip = run_experiment(&ExperimentConfig { method: Method::AsePip, ..base.clone() }).unwrap();
            let d_seq_nonseq: Vec<f64> = seq.report.per_snapshot.iter().zip(&nonseq.report.per_snapshot)
                .map(|(a, b)| a.auc - b.auc).collect();
            let d_seq_pip: Vec<f64> = seq.report.per_snapshot.iter().zip(&pip.report.per_snapshot)
                .map(|(a, b)| a.auc - b.auc).collect();
            let (s1, se1) = lsq_slope(&d_seq_nonseq);
            let (s2, _) = lsq_slope(&d_seq_pip);
            println!("theta {theta} seed {seed}: slope(seq-nonseq) {s1:.5} (se {se1:.5}), slope(seq-pip) {s2:.5}, |s2|<|s1|: {}  aip_mean {:.3} pip_mean {:.3} elapsed {:?}",
                s2.abs() < s1.abs(), nonseq.report.mean_auc, pip.report.mean_auc, t0.elapsed());
        }
    }
}
