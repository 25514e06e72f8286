//! RDPG embedding families for snapshot series: individual adjacency
//! spectral embeddings (ASE), their directed analogue via the SVD (DASE),
//! the joint omnibus embedding, and the common-subspace MASE decomposition.
//!
//! Latent positions are only identified up to orthogonal transformations,
//! so tests and downstream consumers compare Gram matrices X̂X̂ᵀ rather than
//! the positions themselves.

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CsrMatrix, SnapshotSeries};
use crate::spectral::{self, MatrixOperator, Options, SumOuterOperator, SymmetricOperator};

/// Counts of retained positive / negative eigenvalues. The inner products
/// used for scoring are unweighted, but the signature is recorded for the
/// alignment routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub d_plus: usize,
    pub d_minus: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.d_plus + self.d_minus
    }

    /// Signature of a definite embedding (all directions positive).
    pub fn definite(d: usize) -> Self {
        Signature {
            d_plus: d,
            d_minus: 0,
        }
    }
}

/// Latent-position estimate X̂ for one (symmetric) snapshot.
#[derive(Debug, Clone)]
pub struct Embedding {
    /// n×d latent positions.
    pub positions: Array2<f64>,
    pub signature: Signature,
    /// 1-based snapshot index within the owning series, when applicable.
    pub snapshot_id: Option<usize>,
}

impl Embedding {
    /// Score matrix X̂X̂ᵀ.
    pub fn gram(&self) -> Array2<f64> {
        self.positions.dot(&self.positions.t())
    }
}

/// Source/target latent positions for a directed or bipartite snapshot.
#[derive(Debug, Clone)]
pub struct DirectedEmbedding {
    pub sources: Array2<f64>,
    pub targets: Array2<f64>,
    pub snapshot_id: Option<usize>,
}

impl DirectedEmbedding {
    /// Score matrix X̂Ŷᵀ.
    pub fn gram(&self) -> Array2<f64> {
        self.sources.dot(&self.targets.t())
    }
}

/// Shared orthonormal basis of a COSIE decomposition.
#[derive(Debug, Clone)]
pub enum CosieBasis {
    Undirected(Array2<f64>),
    Directed {
        left: Array2<f64>,
        right: Array2<f64>,
    },
}

/// MASE output: a common basis with per-snapshot d×d weight matrices R̂_t.
#[derive(Debug, Clone)]
pub struct CosieDecomposition {
    pub basis: CosieBasis,
    pub weights: Vec<Array2<f64>>,
}

impl CosieDecomposition {
    /// Estimated link-probability matrix X̂ R̂_t X̂ᵀ for snapshot index `t0`.
    pub fn probabilities(&self, t0: usize) -> Array2<f64> {
        self.combine(&self.weights[t0])
    }

    /// X̂ R X̂ᵀ (or Û R V̂ᵀ) for an arbitrary weight matrix R.
    pub fn combine(&self, r: &Array2<f64>) -> Array2<f64> {
        match &self.basis {
            CosieBasis::Undirected(x) => x.dot(r).dot(&x.t()),
            CosieBasis::Directed { left, right } => left.dot(r).dot(&right.t()),
        }
    }
}

/// Per-snapshot embeddings of a series, one entry per snapshot.
#[derive(Debug, Clone)]
pub enum EmbeddingSeq {
    Undirected(Vec<Embedding>),
    Directed(Vec<DirectedEmbedding>),
}

impl EmbeddingSeq {
    pub fn len(&self) -> usize {
        match self {
            EmbeddingSeq::Undirected(v) => v.len(),
            EmbeddingSeq::Directed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Score matrix X̂_tX̂_tᵀ (or X̂_tŶ_tᵀ) of snapshot index `t0`.
    pub fn gram(&self, t0: usize) -> Array2<f64> {
        match self {
            EmbeddingSeq::Undirected(v) => v[t0].gram(),
            EmbeddingSeq::Directed(v) => v[t0].gram(),
        }
    }
}

/// Embedding family used by [`embed_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedMethod {
    IndividualAse,
    IndividualDase,
    Omnibus,
}

/// Rows of the omnibus matrix are capped to keep its decomposition from
/// exhausting memory on long series.
pub const DEFAULT_OMNIBUS_ROW_CAP: usize = 200_000;

/// Adjacency spectral embedding X̂ = Γ̂|Λ̂|^{1/2} of a symmetric matrix.
pub fn ase(a: &CsrMatrix, d: usize) -> Result<Embedding> {
    ase_with(a, d, &Options::default())
}

pub fn ase_with(a: &CsrMatrix, d: usize, opts: &Options) -> Result<Embedding> {
    let eig = spectral::truncated_eig_with(a, d, opts)?;
    Ok(embedding_from_eig(eig.values, eig.vectors, None))
}

fn embedding_from_eig(
    values: Vec<f64>,
    mut vectors: Array2<f64>,
    snapshot_id: Option<usize>,
) -> Embedding {
    let d_minus = values.iter().filter(|&&v| v < 0.0).count();
    let d_plus = values.len() - d_minus;
    for (k, &lam) in values.iter().enumerate() {
        let scale = lam.abs().sqrt();
        vectors.column_mut(k).mapv_inplace(|x| x * scale);
    }
    Embedding {
        positions: vectors,
        signature: Signature { d_plus, d_minus },
        snapshot_id,
    }
}

/// Directed adjacency embedding X̂ = ÛD̂^{1/2}, Ŷ = V̂D̂^{1/2}.
pub fn dase(a: &CsrMatrix, d: usize) -> Result<DirectedEmbedding> {
    dase_with(a, d, &Options::default())
}

pub fn dase_with(a: &CsrMatrix, d: usize, opts: &Options) -> Result<DirectedEmbedding> {
    let svd = spectral::truncated_svd_with(a, d, opts)?;
    Ok(directed_from_svd(svd.u, svd.s, svd.v, None))
}

fn directed_from_svd(
    mut u: Array2<f64>,
    s: Vec<f64>,
    mut v: Array2<f64>,
    snapshot_id: Option<usize>,
) -> DirectedEmbedding {
    for (k, &sk) in s.iter().enumerate() {
        let scale = sk.max(0.0).sqrt();
        u.column_mut(k).mapv_inplace(|x| x * scale);
        v.column_mut(k).mapv_inplace(|x| x * scale);
    }
    DirectedEmbedding {
        sources: u,
        targets: v,
        snapshot_id,
    }
}

/// The omnibus operator: diagonal blocks A_t, off-diagonal blocks
/// (A_s + A_t)/2, applied without materializing the nT×nT matrix.
///
/// For a stacked vector x = (x_1, …, x_T), block s of the product is
/// (A_s Σ_t x_t + Σ_t A_t x_t) / 2.
pub struct OmnibusOperator<'a> {
    blocks: &'a [CsrMatrix],
    n_rows: usize,
    n_cols: usize,
}

impl<'a> OmnibusOperator<'a> {
    pub fn new(blocks: &'a [CsrMatrix]) -> Self {
        let (n_rows, n_cols) = blocks[0].shape();
        OmnibusOperator {
            blocks,
            n_rows,
            n_cols,
        }
    }

    fn apply_blocks(&self, x: &[f64], y: &mut [f64], transpose: bool) {
        let (in_dim, out_dim) = if transpose {
            (self.n_rows, self.n_cols)
        } else {
            (self.n_cols, self.n_rows)
        };
        let mut x_sum = vec![0.0; in_dim];
        for xt in x.chunks_exact(in_dim) {
            for (s, &v) in x_sum.iter_mut().zip(xt) {
                *s += v;
            }
        }
        let mut y_sum = vec![0.0; out_dim];
        let mut tmp = vec![0.0; out_dim];
        for (a, xt) in self.blocks.iter().zip(x.chunks_exact(in_dim)) {
            if transpose {
                a.matvec_t(xt, &mut tmp);
            } else {
                a.matvec(xt, &mut tmp);
            }
            for (s, &v) in y_sum.iter_mut().zip(&tmp) {
                *s += v;
            }
        }
        for (a, yt) in self.blocks.iter().zip(y.chunks_exact_mut(out_dim)) {
            if transpose {
                a.matvec_t(&x_sum, &mut tmp);
            } else {
                a.matvec(&x_sum, &mut tmp);
            }
            for ((o, &tv), &sv) in yt.iter_mut().zip(&tmp).zip(&y_sum) {
                *o = 0.5 * (tv + sv);
            }
        }
    }

    /// Dense copy of the omnibus matrix, for small instances and tests.
    pub fn to_dense(&self) -> Array2<f64> {
        let t = self.blocks.len();
        let (nr, nc) = (self.n_rows * t, self.n_cols * t);
        let mut out = Array2::zeros((nr, nc));
        let mut x = vec![0.0; nc];
        let mut y = vec![0.0; nr];
        for j in 0..nc {
            x[j] = 1.0;
            MatrixOperator::apply(self, &x, &mut y);
            for (i, &v) in y.iter().enumerate() {
                out[[i, j]] = v;
            }
            x[j] = 0.0;
        }
        out
    }
}

impl SymmetricOperator for OmnibusOperator<'_> {
    fn dim(&self) -> usize {
        self.n_rows * self.blocks.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_blocks(x, y, false);
    }
}

impl MatrixOperator for OmnibusOperator<'_> {
    fn nrows(&self) -> usize {
        self.n_rows * self.blocks.len()
    }

    fn ncols(&self) -> usize {
        self.n_cols * self.blocks.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_blocks(x, y, false);
    }

    fn apply_t(&self, x: &[f64], y: &mut [f64]) {
        self.apply_blocks(x, y, true);
    }
}

/// Joint omnibus embedding of a series. Rows ((t−1)n+1)..tn of the joint
/// embedding become the per-snapshot embeddings; they are directly
/// comparable and need no alignment step.
pub fn omnibus(series: &SnapshotSeries, d: usize) -> Result<EmbeddingSeq> {
    omnibus_with(series, d, &Options::default(), DEFAULT_OMNIBUS_ROW_CAP)
}

pub fn omnibus_with(
    series: &SnapshotSeries,
    d: usize,
    opts: &Options,
    row_cap: usize,
) -> Result<EmbeddingSeq> {
    let t = series.t_count();
    let (nr, nc) = series.shape();
    if t == 0 {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    if nr * t > row_cap || nc * t > row_cap {
        return Err(Error::InfeasibleSize(format!(
            "omnibus matrix would have {} rows, cap is {row_cap}",
            nr.max(nc) * t
        )));
    }
    let op = OmnibusOperator::new(series.snapshots());
    if series.kind().is_undirected() {
        let eig = spectral::truncated_eig_operator(&op, d, opts)?;
        let joint = embedding_from_eig(eig.values, eig.vectors, None);
        let out = (0..t)
            .map(|t0| Embedding {
                positions: joint
                    .positions
                    .slice(ndarray::s![t0 * nr..(t0 + 1) * nr, ..])
                    .to_owned(),
                signature: joint.signature,
                snapshot_id: Some(t0 + 1),
            })
            .collect();
        Ok(EmbeddingSeq::Undirected(out))
    } else {
        let svd = spectral::truncated_svd_operator(&op, d, opts)?;
        let joint = directed_from_svd(svd.u, svd.s, svd.v, None);
        let out = (0..t)
            .map(|t0| DirectedEmbedding {
                sources: joint
                    .sources
                    .slice(ndarray::s![t0 * nr..(t0 + 1) * nr, ..])
                    .to_owned(),
                targets: joint
                    .targets
                    .slice(ndarray::s![t0 * nc..(t0 + 1) * nc, ..])
                    .to_owned(),
                snapshot_id: Some(t0 + 1),
            })
            .collect();
        Ok(EmbeddingSeq::Directed(out))
    }
}

/// Multiple adjacency spectral embedding: stacks the per-snapshot
/// eigenvector (or singular-vector) blocks and extracts the common basis
/// from the top-d left singular vectors of the stack.
pub fn mase(series: &SnapshotSeries, d: usize) -> Result<CosieDecomposition> {
    mase_with(series, d, &Options::default())
}

pub fn mase_with(series: &SnapshotSeries, d: usize, opts: &Options) -> Result<CosieDecomposition> {
    let t = series.t_count();
    if t == 0 {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    if series.kind().is_undirected() {
        let gammas: Vec<Array2<f64>> = series
            .snapshots()
            .par_iter()
            .map(|a| spectral::truncated_eig_with(a, d, opts).map(|e| e.vectors))
            .collect::<Result<_>>()?;
        let basis = common_basis(&gammas, d, opts)?;
        let weights = series
            .snapshots()
            .iter()
            .map(|a| project_weights(a, &basis, &basis))
            .collect();
        Ok(CosieDecomposition {
            basis: CosieBasis::Undirected(basis),
            weights,
        })
    } else {
        let pairs: Vec<(Array2<f64>, Array2<f64>)> = series
            .snapshots()
            .par_iter()
            .map(|a| spectral::truncated_svd_with(a, d, opts).map(|s| (s.u, s.v)))
            .collect::<Result<_>>()?;
        let lefts: Vec<Array2<f64>> = pairs.iter().map(|(u, _)| u.clone()).collect();
        let rights: Vec<Array2<f64>> = pairs.iter().map(|(_, v)| v.clone()).collect();
        let left = common_basis(&lefts, d, opts)?;
        let right = common_basis(&rights, d, opts)?;
        let weights = series
            .snapshots()
            .iter()
            .map(|a| project_weights(a, &left, &right))
            .collect();
        Ok(CosieDecomposition {
            basis: CosieBasis::Directed { left, right },
            weights,
        })
    }
}

/// Top-d left singular vectors of the horizontal stack of `blocks`,
/// computed from the spectrum of Σ_t B_tB_tᵀ.
fn common_basis(blocks: &[Array2<f64>], d: usize, opts: &Options) -> Result<Array2<f64>> {
    let op = SumOuterOperator::new(blocks);
    let eig = spectral::truncated_eig_operator(&op, d, opts)?;
    Ok(eig.vectors)
}

/// R̂_t = LᵀA_tR for column-orthonormal bases L, R.
fn project_weights(a: &CsrMatrix, left: &Array2<f64>, right: &Array2<f64>) -> Array2<f64> {
    let d = right.ncols();
    let n = a.nrows();
    let mut ar = Array2::<f64>::zeros((n, d));
    let mut tmp = vec![0.0; n];
    for k in 0..d {
        let col: Vec<f64> = right.column(k).to_vec();
        a.matvec(&col, &mut tmp);
        for (i, &v) in tmp.iter().enumerate() {
            ar[[i, k]] = v;
        }
    }
    left.t().dot(&ar)
}

/// Per-snapshot embeddings of a series with the requested method.
pub fn embed_series(
    series: &SnapshotSeries,
    d: usize,
    method: EmbedMethod,
) -> Result<EmbeddingSeq> {
    embed_series_with(series, d, method, &Options::default())
}

pub fn embed_series_with(
    series: &SnapshotSeries,
    d: usize,
    method: EmbedMethod,
    opts: &Options,
) -> Result<EmbeddingSeq> {
    match method {
        EmbedMethod::IndividualAse => {
            if !series.kind().is_undirected() {
                return Err(Error::NotSymmetric);
            }
            let out: Vec<Embedding> = series
                .snapshots()
                .par_iter()
                .enumerate()
                .map(|(t0, a)| {
                    ase_with(a, d, opts).map(|mut e| {
                        e.snapshot_id = Some(t0 + 1);
                        e
                    })
                })
                .collect::<Result<_>>()?;
            Ok(EmbeddingSeq::Undirected(out))
        }
        EmbedMethod::IndividualDase => {
            let out: Vec<DirectedEmbedding> = series
                .snapshots()
                .par_iter()
                .enumerate()
                .map(|(t0, a)| {
                    dase_with(a, d, opts).map(|mut e| {
                        e.snapshot_id = Some(t0 + 1);
                        e
                    })
                })
                .collect::<Result<_>>()?;
            Ok(EmbeddingSeq::Directed(out))
        }
        EmbedMethod::Omnibus => omnibus_with(series, d, opts, DEFAULT_OMNIBUS_ROW_CAP),
    }
}

/// ASE of a dense symmetric matrix view, used when embedding real-valued
/// predicted adjacency matrices.
pub fn ase_dense(view: &ArrayView2<'_, f64>, d: usize, opts: &Options) -> Result<Embedding> {
    struct DenseSym<'a, 'b>(&'a ArrayView2<'b, f64>);
    impl SymmetricOperator for DenseSym<'_, '_> {
        fn dim(&self) -> usize {
            self.0.nrows()
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            let xv = ndarray::ArrayView1::from(x);
            let prod = self.0.dot(&xv);
            for (o, v) in y.iter_mut().zip(prod.iter()) {
                *o = *v;
            }
        }
    }
    if view.nrows() != view.ncols() {
        return Err(Error::NotSymmetric);
    }
    let eig = spectral::truncated_eig_operator(&DenseSym(view), d, opts)?;
    Ok(embedding_from_eig(eig.values, eig.vectors, None))
}


/// Row-major little-endian f64 matrix files used by the embedding and
/// score persistence formats.
pub mod matio {
    use ndarray::Array2;
    use std::io::{Read, Write};
    use std::path::Path;

    use crate::error::Result;

    pub fn write_matrix(path: impl AsRef<Path>, m: &Array2<f64>) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        for v in m.iter() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_matrix(path: impl AsRef<Path>, rows: usize, cols: usize) -> Result<Array2<f64>> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut buf = vec![0u8; rows * cols * 8];
        r.read_exact(&mut buf)?;
        let vals: Vec<f64> = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Array2::from_shape_vec((rows, cols), vals).expect("shape matches buffer"))
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct EmbeddingManifest {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_cols: Option<usize>,
    d: usize,
    t_count: usize,
    method: EmbedMethod,
    directed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    signatures: Option<Vec<Signature>>,
}

/// Persist a sequence of embeddings: a JSON manifest plus one binary
/// float64 matrix file per snapshot (two for directed sequences).
pub fn save_embeddings(
    dir: impl AsRef<std::path::Path>,
    seq: &EmbeddingSeq,
    method: EmbedMethod,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let manifest = match seq {
        EmbeddingSeq::Undirected(v) => EmbeddingManifest {
            n: v[0].positions.nrows(),
            n_cols: None,
            d: v[0].positions.ncols(),
            t_count: v.len(),
            method,
            directed: false,
            signatures: Some(v.iter().map(|e| e.signature).collect()),
        },
        EmbeddingSeq::Directed(v) => EmbeddingManifest {
            n: v[0].sources.nrows(),
            n_cols: Some(v[0].targets.nrows()),
            d: v[0].sources.ncols(),
            t_count: v.len(),
            method,
            directed: true,
            signatures: None,
        },
    };
    let f = std::fs::File::create(dir.join("manifest.json"))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(f), &manifest)?;
    match seq {
        EmbeddingSeq::Undirected(v) => {
            for (t0, e) in v.iter().enumerate() {
                matio::write_matrix(
                    dir.join(format!("positions_{:05}.bin", t0 + 1)),
                    &e.positions,
                )?;
            }
        }
        EmbeddingSeq::Directed(v) => {
            for (t0, e) in v.iter().enumerate() {
                matio::write_matrix(dir.join(format!("sources_{:05}.bin", t0 + 1)), &e.sources)?;
                matio::write_matrix(dir.join(format!("targets_{:05}.bin", t0 + 1)), &e.targets)?;
            }
        }
    }
    Ok(())
}

/// Load a sequence previously written by [`save_embeddings`].
pub fn load_embeddings(dir: impl AsRef<std::path::Path>) -> Result<EmbeddingSeq> {
    let dir = dir.as_ref();
    let manifest: EmbeddingManifest = serde_json::from_reader(std::io::BufReader::new(
        std::fs::File::open(dir.join("manifest.json"))?,
    ))?;
    if manifest.directed {
        let nc = manifest.n_cols.unwrap_or(manifest.n);
        let mut out = Vec::with_capacity(manifest.t_count);
        for t0 in 0..manifest.t_count {
            out.push(DirectedEmbedding {
                sources: matio::read_matrix(
                    dir.join(format!("sources_{:05}.bin", t0 + 1)),
                    manifest.n,
                    manifest.d,
                )?,
                targets: matio::read_matrix(
                    dir.join(format!("targets_{:05}.bin", t0 + 1)),
                    nc,
                    manifest.d,
                )?,
                snapshot_id: Some(t0 + 1),
            });
        }
        Ok(EmbeddingSeq::Directed(out))
    } else {
        let sigs = manifest
            .signatures
            .unwrap_or_else(|| vec![Signature::definite(manifest.d); manifest.t_count]);
        let mut out = Vec::with_capacity(manifest.t_count);
        for t0 in 0..manifest.t_count {
            out.push(Embedding {
                positions: matio::read_matrix(
                    dir.join(format!("positions_{:05}.bin", t0 + 1)),
                    manifest.n,
                    manifest.d,
                )?,
                signature: sigs[t0],
                snapshot_id: Some(t0 + 1),
            });
        }
        Ok(EmbeddingSeq::Undirected(out))
    }
}
