//! Sequences of graph snapshots stored as sparse binary adjacency matrices.
//!
//! A [`SnapshotSeries`] holds an ordered list of adjacency matrices over a
//! fixed node set. Undirected series store symmetric matrices, unipartite
//! series are hollow (zero diagonal), and every stored entry is exactly 1.

mod ingest;
mod io;
mod sparse;

pub use ingest::{ingest_edge_list, ingest_edge_list_path, EdgeListSpec, NodeCensus};
pub use io::{load_series, save_series};
pub use sparse::CsrMatrix;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Structural class of a graph, together with its node counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Undirected { n: usize },
    Directed { n: usize },
    Bipartite { n_rows: usize, n_cols: usize },
}

/// Tag used before node counts are known (e.g. during ingestion).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKindTag {
    Undirected,
    Directed,
    Bipartite,
}

impl GraphKind {
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            GraphKind::Undirected { n } | GraphKind::Directed { n } => (n, n),
            GraphKind::Bipartite { n_rows, n_cols } => (n_rows, n_cols),
        }
    }

    pub fn tag(&self) -> GraphKindTag {
        match self {
            GraphKind::Undirected { .. } => GraphKindTag::Undirected,
            GraphKind::Directed { .. } => GraphKindTag::Directed,
            GraphKind::Bipartite { .. } => GraphKindTag::Bipartite,
        }
    }

    pub fn is_undirected(&self) -> bool {
        matches!(self, GraphKind::Undirected { .. })
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self, GraphKind::Bipartite { .. })
    }

    /// Unipartite graphs share one node set and have hollow adjacency matrices.
    pub fn is_unipartite(&self) -> bool {
        !self.is_bipartite()
    }

    /// Number of node pairs eligible to carry a link: unordered pairs for
    /// undirected graphs, ordered off-diagonal pairs for directed graphs,
    /// the full grid for bipartite graphs.
    pub fn pair_count(&self) -> usize {
        match *self {
            GraphKind::Undirected { n } => n * (n - 1) / 2,
            GraphKind::Directed { n } => n * (n - 1),
            GraphKind::Bipartite { n_rows, n_cols } => n_rows * n_cols,
        }
    }

    /// Enumerate the eligible pair space in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.pair_count());
        match *self {
            GraphKind::Undirected { n } => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        out.push((i, j));
                    }
                }
            }
            GraphKind::Directed { n } => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            out.push((i, j));
                        }
                    }
                }
            }
            GraphKind::Bipartite { n_rows, n_cols } => {
                for i in 0..n_rows {
                    for j in 0..n_cols {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }
}

/// One weight per snapshot, applied in reversed order by
/// [`SnapshotSeries::collapse_weighted`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Self {
        WeightVector(weights)
    }

    /// All weights 1/T: the averaged adjacency matrix.
    pub fn uniform(t_count: usize) -> Self {
        WeightVector(vec![1.0 / t_count as f64; t_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Ordered sequence of sparse binary adjacency matrices over a fixed node set.
///
/// Immutable after construction and safe to share across parallel workers.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSeries {
    kind: GraphKind,
    row_labels: Vec<String>,
    col_labels: Option<Vec<String>>,
    snapshots: Vec<CsrMatrix>,
}

impl SnapshotSeries {
    /// Validates the structural invariants: shared dimensions, unit entries,
    /// symmetry for undirected series and hollowness for unipartite series.
    pub fn new(
        kind: GraphKind,
        row_labels: Vec<String>,
        col_labels: Option<Vec<String>>,
        snapshots: Vec<CsrMatrix>,
    ) -> Result<Self> {
        let (nr, nc) = kind.shape();
        if row_labels.len() != nr {
            return Err(Error::InvalidArgument(format!(
                "{} row labels for {} rows",
                row_labels.len(),
                nr
            )));
        }
        match (&col_labels, kind.is_bipartite()) {
            (Some(c), true) if c.len() == nc => {}
            (None, false) => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "column labels are required exactly for bipartite series".into(),
                ))
            }
        }
        for (t, a) in snapshots.iter().enumerate() {
            if a.shape() != (nr, nc) {
                return Err(Error::ShapeMismatch(format!(
                    "snapshot {} has shape {:?}, expected {:?}",
                    t + 1,
                    a.shape(),
                    (nr, nc)
                )));
            }
            for (i, j, v) in a.iter() {
                if v != 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "snapshot {} entry ({i}, {j}) is {v}, not 1",
                        t + 1
                    )));
                }
                if kind.is_unipartite() && i == j {
                    return Err(Error::InvalidArgument(format!(
                        "snapshot {} has a diagonal entry at {i}",
                        t + 1
                    )));
                }
            }
            if kind.is_undirected() && !a.is_symmetric(0.0) {
                return Err(Error::NotSymmetric);
            }
        }
        Ok(SnapshotSeries {
            kind,
            row_labels,
            col_labels,
            snapshots,
        })
    }

    /// Series with anonymous labels `0..n`, for simulated data and tests.
    pub fn from_matrices(kind: GraphKind, snapshots: Vec<CsrMatrix>) -> Result<Self> {
        let (nr, nc) = kind.shape();
        let row_labels = (0..nr).map(|i| i.to_string()).collect();
        let col_labels = kind
            .is_bipartite()
            .then(|| (0..nc).map(|j| j.to_string()).collect());
        Self::new(kind, row_labels, col_labels, snapshots)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Number of snapshots T.
    pub fn t_count(&self) -> usize {
        self.snapshots.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.kind.shape()
    }

    /// Snapshot A_t by zero-based index.
    pub fn snapshot(&self, t: usize) -> &CsrMatrix {
        &self.snapshots[t]
    }

    pub fn snapshots(&self) -> &[CsrMatrix] {
        &self.snapshots
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    /// Links of snapshot `t` in the eligible pair space (undirected edges are
    /// reported once, with i < j).
    pub fn links(&self, t: usize) -> Vec<(usize, usize)> {
        let a = &self.snapshots[t];
        let mut out = Vec::new();
        for (i, j, _) in a.iter() {
            if self.kind.is_undirected() && i >= j {
                continue;
            }
            out.push((i, j));
        }
        out
    }

    /// Split into snapshots 1..T′ and T′+1..T, sharing node indexing.
    pub fn split_train_test(&self, t_prime: usize) -> Result<(SnapshotSeries, SnapshotSeries)> {
        let t = self.t_count();
        if t_prime == 0 || t_prime >= t {
            return Err(Error::InvalidArgument(format!(
                "t_prime must satisfy 1 <= t_prime < T = {t}, got {t_prime}"
            )));
        }
        let train = SnapshotSeries {
            kind: self.kind,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            snapshots: self.snapshots[..t_prime].to_vec(),
        };
        let test = SnapshotSeries {
            kind: self.kind,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            snapshots: self.snapshots[t_prime..].to_vec(),
        };
        Ok((train, test))
    }

    /// Collapsed matrix Σ_t ψ_{T−t+1} A_t. With uniform weights 1/T this is
    /// the averaged adjacency matrix.
    pub fn collapse_weighted(&self, weights: &WeightVector) -> Result<CsrMatrix> {
        let t = self.t_count();
        if weights.len() != t {
            return Err(Error::InvalidArgument(format!(
                "weight vector has length {}, series has {} snapshots",
                weights.len(),
                t
            )));
        }
        let mats: Vec<&CsrMatrix> = self.snapshots.iter().collect();
        // ψ indices run backwards: snapshot t (1-based) is scaled by ψ_{T−t+1}.
        let w: Vec<f64> = (0..t).map(|t0| weights.as_slice()[t - 1 - t0]).collect();
        CsrMatrix::weighted_sum(&mats, &w)
    }
}
