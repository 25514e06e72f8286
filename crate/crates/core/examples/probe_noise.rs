use linkpred_core::embed::{embed_series, EmbedMethod};
use linkpred_core::pipeline::derive_seed;
use linkpred_core::simulate::*;
use ndarray::Array2;

fn main() {
    let seed = derive_seed(101, 1);
    let cfg = SeasonalSbmConfig::defaults(seed);
    let (series, truth) = seasonal_sbm(&cfg).unwrap();
    let (train, _) = series.split_train_test(80).unwrap();
    let seq = embed_series(&train, 5, EmbedMethod::IndividualAse).unwrap();
    let n = 100;
    // single-snapshot gram noise vs true P
    let mut rmse1 = 0.0;
    let mut cnt = 0.0;
    for t0 in 0..10 {
        let g = seq.gram(t0);
        for i in 0..n { for j in 0..n { if i != j {
            let p = truth.probability(i, j, t0 + 1);
            rmse1 += (g[[i,j]] - p).powi(2); cnt += 1.0;
        }}}
    }
    println!("single-gram RMSE vs true P: {:.4}", (rmse1/cnt).sqrt());
    // phase-mean gram noise
    let grams: Vec<Array2<f64>> = (0..80).map(|t0| seq.gram(t0)).collect();
    let mut rmse2 = 0.0; let mut cnt2 = 0.0;
    for ph in 0..7 {
        let idx: Vec<usize> = (0..80).filter(|t0| (t0+1) % 7 == ph).collect();
        let mut m = Array2::<f64>::zeros((n,n));
        for &t0 in &idx { m += &grams[t0]; }
        m /= idx.len() as f64;
        // compare against true probability at any t with that phase
        let t_ref = if ph == 0 { 7 } else { ph };
        for i in 0..n { for j in 0..n { if i != j {
            let p = truth.probability(i, j, t_ref);
            rmse2 += (m[[i,j]] - p).powi(2); cnt2 += 1.0;
        }}}
    }
    println!("phase-mean-gram RMSE vs true P: {:.4}", (rmse2/cnt2).sqrt());
    // distribution spread of true P for reference
    let mut ps = Vec::new();
    for i in 0..n { for j in (i+1)..n { ps.push(truth.probability(i, j, 1)); } }
    let mean: f64 = ps.iter().sum::<f64>() / ps.len() as f64;
    let sd: f64 = (ps.iter().map(|p| (p-mean).powi(2)).sum::<f64>() / ps.len() as f64).sqrt();
    println!("true P spread: mean {:.3} sd {:.3}", mean, sd);
}
