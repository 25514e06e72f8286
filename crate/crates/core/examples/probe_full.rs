use linkpred_core::pipeline::*;
use linkpred_core::score::ForecasterConfig;

fn lsq(y: &[f64]) -> (f64, f64) {
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
    let rss: f64 = y.iter().enumerate().map(|(k, v)| (v - ym - slope * (k as f64 - xm)).powi(2)).sum();
    (slope, (rss / (n - 2.0) / sxx).sqrt())
}

fn main() {
    let seeds: Vec<u64> = (1..=10).collect();
    println!("== criterion 1 (seasonal SBM) ==");
    for &seed in &seeds {
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
        let col = run_experiment(&base).unwrap().report.mean_auc;
        let aip = run_experiment(&ExperimentConfig { method: Method::AseAip, ..base.clone() }).unwrap().report.mean_auc;
        let pip = run_experiment(&ExperimentConfig { method: Method::AsePip, ..base.clone() }).unwrap().report.mean_auc;
        println!("seed {seed}: collapsed {col:.4} aip {aip:.4} pip {pip:.4}  aip>col {} pip>aip {} pip>0.8 {}",
            aip > col, pip > aip, pip > 0.8);
    }
    println!("== criterion 2 (logistic) ==");
    for theta in [0.075f64, 0.0] {
        for &seed in &seeds {
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
            let d1: Vec<f64> = seq.report.per_snapshot.iter().zip(&nonseq.report.per_snapshot).map(|(a, b)| a.auc - b.auc).collect();
            let d2: Vec<f64> = seq.report.per_snapshot.iter().zip(&pip.report.per_snapshot).map(|(a, b)| a.auc - b.auc).collect();
            let (s1, se1) = lsq(&d1);
            let (s2, _) = lsq(&d2);
            println!("theta {theta} seed {seed}: s1 {s1:+.6} se1 {se1:.6} t1 {:+.2}  s2 {s2:+.6} |s2|<|s1| {}",
                s1 / se1, s2.abs() < s1.abs());
        }
    }
}
