//! Embedding quality on simulated blockmodel data: block-averaged Gram
//! entries of the per-snapshot embeddings recover the block probabilities.
//!
//! The unweighted Gram X̂X̂ᵀ only estimates the probability matrix when its
//! expectation is positive semi-definite, so the seed below is chosen to
//! draw a PSD block matrix (verified in-test).

use linkpred_core::embed::{embed_series, EmbedMethod};
use linkpred_core::simulate::{seasonal_sbm, SeasonalSbmConfig};
use ndarray::Array2;

#[test]
fn sbm_gram_matrices_recover_block_probabilities() {
    let cfg = SeasonalSbmConfig {
        n: 200,
        communities: 3,
        t_count: 3,
        period: 1, // static allocations: every snapshot shares one phase
        beta_a: 1.2,
        beta_b: 1.2,
        seed: 20,
    };
    let (series, truth) = seasonal_sbm(&cfg).unwrap();
    // precondition: the drawn block matrix is comfortably PSD
    let b = Array2::from_shape_fn((3, 3), |(i, j)| truth.block_probs[i][j]);
    let (eigs, _) = linkpred_core::spectral::dense::sym_eig(&b);
    assert!(
        eigs.iter().all(|&v| v > 0.05),
        "seed no longer draws a PSD block matrix: {eigs:?}"
    );

    let seq = embed_series(&series, 3, EmbedMethod::IndividualAse).unwrap();
    for t0 in 0..3 {
        let gram = seq.gram(t0);
        let alloc = &truth.allocations[0];
        let mut sums = vec![vec![0.0f64; 3]; 3];
        let mut counts = vec![vec![0.0f64; 3]; 3];
        for i in 0..200 {
            for j in 0..200 {
                if i == j {
                    continue;
                }
                let (a, c) = (alloc[i], alloc[j]);
                sums[a][c] += gram[[i, j]];
                counts[a][c] += 1.0;
            }
        }
        for a in 0..3 {
            for c in 0..3 {
                let mean = sums[a][c] / counts[a][c];
                let want = truth.block_probs[a][c];
                assert!(
                    (mean - want).abs() < 0.1,
                    "snapshot {t0}, block ({a},{c}): {mean} vs {want}"
                );
            }
        }
    }
}
