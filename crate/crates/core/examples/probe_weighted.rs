// Diagnostic: compare unweighted grams X X^T against signature-weighted
// X I(p,q) X^T for AIP and a phase-mean PIP proxy on the seasonal SBM.
use linkpred_core::embed::{embed_series, EmbedMethod, EmbeddingSeq};
use linkpred_core::eval::*;
use linkpred_core::pipeline::derive_seed;
use linkpred_core::score::{ScoreMatrix, ScoreValues};
use linkpred_core::simulate::*;
use ndarray::Array2;

fn main() {
    for root in 1u64..=10 {
        let seed = derive_seed(root, 1);
        let cfg = SeasonalSbmConfig::defaults(seed);
        let (series, _) = seasonal_sbm(&cfg).unwrap();
        let (train, _) = series.split_train_test(80).unwrap();
        let seq = embed_series(&train, 5, EmbedMethod::IndividualAse).unwrap();
        let n = 100;
        let scheme = SubsampleScheme { variant: SubsampleVariant::UniformZeros, sample_count: None, seed: 7 };
        let grams: Vec<Array2<f64>> = match &seq {
            EmbeddingSeq::Undirected(v) => v.iter().map(|e| {
                // signature-weighted product
                let mut w = e.positions.clone();
                for k in e.signature.d_plus..(e.signature.d_plus + e.signature.d_minus) {
                    w.column_mut(k).mapv_inplace(|x| -x);
                }
                e.positions.dot(&w.t())
            }).collect(),
            _ => unreachable!(),
        };
        // phase-mean scores per test snapshot (proxy for a perfect seasonal forecaster)
        let scores: Vec<ScoreMatrix> = (81..=100).map(|t| {
            let ph = t % 7;
            let idx: Vec<usize> = (0..80).filter(|t0| (t0 + 1) % 7 == ph).collect();
            let mut m = Array2::<f64>::zeros((n, n));
            for &t0 in &idx { m += &grams[t0]; }
            m /= idx.len() as f64;
            ScoreMatrix { values: ScoreValues::Dense(m), horizon: Some(t), method_tag: "w-pm".into() }
        }).collect();
        let r = evaluate_method(&scores, &series, 80, &scheme, "w-pm").unwrap();
        // unweighted phase-mean for comparison
        let ug: Vec<Array2<f64>> = (0..80).map(|t0| seq.gram(t0)).collect();
        let uscores: Vec<ScoreMatrix> = (81..=100).map(|t| {
            let ph = t % 7;
            let idx: Vec<usize> = (0..80).filter(|t0| (t0 + 1) % 7 == ph).collect();
            let mut m = Array2::<f64>::zeros((n, n));
            for &t0 in &idx { m += &ug[t0]; }
            m /= idx.len() as f64;
            ScoreMatrix { values: ScoreValues::Dense(m), horizon: Some(t), method_tag: "u-pm".into() }
        }).collect();
        let ru = evaluate_method(&uscores, &series, 80, &scheme, "u-pm").unwrap();
        println!("root {root}: weighted-phase-mean {:.4}  unweighted-phase-mean {:.4}", r.mean_auc, ru.mean_auc);
    }
}
