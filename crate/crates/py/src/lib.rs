//! Python bindings for the temporal link prediction library.
//!
//! The module exposes the main types and operations: snapshot series
//! (simulation, edge-list ingestion, persistence), spectral embeddings,
//! SARI forecasting, ROC/AUC evaluation, Procrustes alignment and the
//! experiment pipeline. Matrices cross the boundary as nested lists;
//! experiment configurations and reports as JSON strings.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use linkpred_core::embed::{self, EmbedMethod, EmbeddingSeq};
use linkpred_core::error::Error;
use linkpred_core::eval;
use linkpred_core::forecast::{self, SariBounds, SariModel, SariSpec};
use linkpred_core::graph::{self, EdgeListSpec, GraphKind, GraphKindTag, SnapshotSeries};
use linkpred_core::pipeline;
use linkpred_core::simulate;
use ndarray::Array2;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn matrix_to_lists(m: &Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn lists_to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Array2<f64>> {
    let nr = rows.len();
    let nc = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((nr, nc), flat).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_kind(kind: &str) -> PyResult<GraphKindTag> {
    match kind {
        "undirected" => Ok(GraphKindTag::Undirected),
        "directed" => Ok(GraphKindTag::Directed),
        "bipartite" => Ok(GraphKindTag::Bipartite),
        other => Err(PyValueError::new_err(format!("unknown graph kind {other:?}"))),
    }
}

/// Ordered sequence of sparse binary adjacency snapshots.
#[pyclass(name = "SnapshotSeries")]
#[derive(Clone)]
struct PySnapshotSeries {
    inner: SnapshotSeries,
}

#[pymethods]
impl PySnapshotSeries {
    /// Ingest a delimiter-separated edge list (columns: time, source,
    /// destination; `#` comments).
    #[staticmethod]
    #[pyo3(signature = (path, kind, delimiter=None))]
    fn from_edge_list(path: &str, kind: &str, delimiter: Option<char>) -> PyResult<Self> {
        let spec = EdgeListSpec {
            delimiter,
            ..Default::default()
        };
        let inner = graph::ingest_edge_list_path(path, &spec, parse_kind(kind)?, None)
            .map_err(py_err)?;
        Ok(PySnapshotSeries { inner })
    }

    /// Load a series directory written by `save`.
    #[staticmethod]
    fn load(dir: &str) -> PyResult<Self> {
        Ok(PySnapshotSeries {
            inner: graph::load_series(dir).map_err(py_err)?,
        })
    }

    fn save(&self, dir: &str) -> PyResult<()> {
        graph::save_series(&self.inner, dir).map_err(py_err)
    }

    #[getter]
    fn t_count(&self) -> usize {
        self.inner.t_count()
    }

    #[getter]
    fn kind(&self) -> String {
        match self.inner.kind() {
            GraphKind::Undirected { .. } => "undirected".into(),
            GraphKind::Directed { .. } => "directed".into(),
            GraphKind::Bipartite { .. } => "bipartite".into(),
        }
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    /// Links of snapshot `t0` (0-based), undirected edges reported once.
    fn links(&self, t0: usize) -> PyResult<Vec<(usize, usize)>> {
        if t0 >= self.inner.t_count() {
            return Err(PyValueError::new_err("snapshot index out of range"));
        }
        Ok(self.inner.links(t0))
    }

    /// Split into the first `t_prime` snapshots and the rest.
    fn split(&self, t_prime: usize) -> PyResult<(PySnapshotSeries, PySnapshotSeries)> {
        let (a, b) = self.inner.split_train_test(t_prime).map_err(py_err)?;
        Ok((PySnapshotSeries { inner: a }, PySnapshotSeries { inner: b }))
    }

    fn __repr__(&self) -> String {
        let (nr, nc) = self.inner.shape();
        format!(
            "SnapshotSeries(kind={}, shape=({nr}, {nc}), t_count={})",
            self.kind(),
            self.inner.t_count()
        )
    }
}

/// Per-snapshot latent-position embeddings of a series.
#[pyclass(name = "EmbeddingSequence")]
struct PyEmbeddingSequence {
    inner: EmbeddingSeq,
}

#[pymethods]
impl PyEmbeddingSequence {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Score matrix X̂_tX̂_tᵀ (or X̂_tŶ_tᵀ) of snapshot `t0`.
    fn gram(&self, t0: usize) -> PyResult<Vec<Vec<f64>>> {
        if t0 >= self.inner.len() {
            return Err(PyValueError::new_err("snapshot index out of range"));
        }
        Ok(matrix_to_lists(&self.inner.gram(t0)))
    }

    /// Latent positions of snapshot `t0`; directed sequences return the
    /// source positions.
    fn positions(&self, t0: usize) -> PyResult<Vec<Vec<f64>>> {
        if t0 >= self.inner.len() {
            return Err(PyValueError::new_err("snapshot index out of range"));
        }
        Ok(match &self.inner {
            EmbeddingSeq::Undirected(v) => matrix_to_lists(&v[t0].positions),
            EmbeddingSeq::Directed(v) => matrix_to_lists(&v[t0].sources),
        })
    }
}

/// Fitted seasonal autoregressive model.
#[pyclass(name = "SariModel")]
#[derive(Clone)]
struct PySariModel {
    inner: SariModel,
}

#[pymethods]
impl PySariModel {
    #[getter]
    fn spec(&self) -> (usize, usize, usize, usize, usize) {
        let s = self.inner.spec;
        (s.ar, s.diff, s.seasonal_ar, s.seasonal_diff, s.period)
    }

    #[getter]
    fn ar_coeffs(&self) -> Vec<f64> {
        self.inner.ar_coeffs.clone()
    }

    #[getter]
    fn seasonal_ar_coeffs(&self) -> Vec<f64> {
        self.inner.seasonal_ar_coeffs.clone()
    }

    #[getter]
    fn intercept(&self) -> f64 {
        self.inner.intercept
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.inner.sigma2
    }

    /// k-step forecasts on the original scale.
    fn forecast(&self, history: Vec<f64>, horizon: usize) -> PyResult<Vec<f64>> {
        forecast::forecast(&self.inner, &history, horizon).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        let s = self.inner.spec;
        format!(
            "SariModel(({},{})({},{})_{}, intercept={:.4}, sigma2={:.4})",
            s.ar, s.diff, s.seasonal_ar, s.seasonal_diff, s.period, self.inner.intercept,
            self.inner.sigma2
        )
    }
}

/// Draw a seasonal stochastic blockmodel series.
#[pyfunction]
#[pyo3(signature = (n=100, communities=5, t_count=100, period=7, beta_a=1.2, beta_b=1.2, seed=0))]
#[allow(clippy::too_many_arguments)]
fn simulate_seasonal_sbm(
    n: usize,
    communities: usize,
    t_count: usize,
    period: usize,
    beta_a: f64,
    beta_b: f64,
    seed: u64,
) -> PyResult<PySnapshotSeries> {
    let cfg = simulate::SeasonalSbmConfig {
        n,
        communities,
        t_count,
        period,
        beta_a,
        beta_b,
        seed,
    };
    let (series, _) = simulate::seasonal_sbm(&cfg).map_err(py_err)?;
    Ok(PySnapshotSeries { inner: series })
}

/// Draw a directed logistic dynamic series.
#[pyfunction]
#[pyo3(signature = (n=100, t_count=100, theta=0.0, baseline_low=-6.9, baseline_high=0.0, seed=0))]
fn simulate_logistic(
    n: usize,
    t_count: usize,
    theta: f64,
    baseline_low: f64,
    baseline_high: f64,
    seed: u64,
) -> PyResult<PySnapshotSeries> {
    let cfg = simulate::LogisticDynConfig {
        n,
        t_count,
        theta,
        baseline_low,
        baseline_high,
        seed,
    };
    let (series, _) = simulate::logistic_dynamic(&cfg).map_err(py_err)?;
    Ok(PySnapshotSeries { inner: series })
}

/// Embed every snapshot: method is `individual-ase`, `individual-dase`
/// or `omnibus`.
#[pyfunction]
fn embed_series(series: &PySnapshotSeries, d: usize, method: &str) -> PyResult<PyEmbeddingSequence> {
    let method = match method {
        "individual-ase" => EmbedMethod::IndividualAse,
        "individual-dase" => EmbedMethod::IndividualDase,
        "omnibus" => EmbedMethod::Omnibus,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown embedding method {other:?}"
            )))
        }
    };
    let inner = embed::embed_series(&series.inner, d, method).map_err(py_err)?;
    Ok(PyEmbeddingSequence { inner })
}

/// ROC AUC with midrank tie handling.
#[pyfunction]
fn roc_auc(scores: Vec<f64>, labels: Vec<bool>) -> PyResult<f64> {
    eval::roc_auc(&scores, &labels).map_err(py_err)
}

/// Fit a SARI(p, b)(P, B)_s model by conditional least squares.
#[pyfunction]
#[pyo3(signature = (z, ar=0, diff=0, seasonal_ar=0, seasonal_diff=0, period=1))]
fn fit_sari(
    z: Vec<f64>,
    ar: usize,
    diff: usize,
    seasonal_ar: usize,
    seasonal_diff: usize,
    period: usize,
) -> PyResult<PySariModel> {
    let spec = SariSpec::new(ar, diff, seasonal_ar, seasonal_diff, period);
    Ok(PySariModel {
        inner: forecast::fit_sari(&z, spec).map_err(py_err)?,
    })
}

/// AICc-selected SARI fit over the default order grid.
#[pyfunction]
#[pyo3(signature = (z, period=7))]
fn auto_sari(z: Vec<f64>, period: usize) -> PyResult<PySariModel> {
    let fit = forecast::auto_sari(&z, period, &SariBounds::default()).map_err(py_err)?;
    Ok(PySariModel { inner: fit.model })
}

/// Orthogonal Procrustes rotation aligning `x2` onto `x1`.
#[pyfunction]
fn procrustes(x1: Vec<Vec<f64>>, x2: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let a = lists_to_matrix(x1)?;
    let b = lists_to_matrix(x2)?;
    let omega = linkpred_core::align::procrustes(&a.view(), &b.view()).map_err(py_err)?;
    Ok(matrix_to_lists(&omega))
}

/// Run a full experiment from a JSON configuration string; returns the run
/// report as a JSON string.
#[pyfunction]
fn run_experiment(config_json: &str) -> PyResult<String> {
    let cfg: pipeline::ExperimentConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let run = pipeline::run_experiment(&cfg).map_err(py_err)?;
    serde_json::to_string_pretty(&run).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Compare methods against the configured reference with paired
/// repeated-subsampling difference intervals; returns a JSON string.
#[pyfunction]
#[pyo3(signature = (config_json, methods, repetitions=100, level=0.95))]
fn compare_methods(
    config_json: &str,
    methods: Vec<String>,
    repetitions: usize,
    level: f64,
) -> PyResult<String> {
    let cfg: pipeline::ExperimentConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let parsed = methods
        .iter()
        .map(|m| pipeline::Method::parse(m).map_err(py_err))
        .collect::<PyResult<Vec<_>>>()?;
    let report =
        pipeline::compare_methods(&cfg, &parsed, repetitions, level).map_err(py_err)?;
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn linkpred_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySnapshotSeries>()?;
    m.add_class::<PyEmbeddingSequence>()?;
    m.add_class::<PySariModel>()?;
    m.add_function(wrap_pyfunction!(simulate_seasonal_sbm, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_logistic, m)?)?;
    m.add_function(wrap_pyfunction!(embed_series, m)?)?;
    m.add_function(wrap_pyfunction!(roc_auc, m)?)?;
    m.add_function(wrap_pyfunction!(fit_sari, m)?)?;
    m.add_function(wrap_pyfunction!(auto_sari, m)?)?;
    m.add_function(wrap_pyfunction!(procrustes, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(compare_methods, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
