//! Temporal link prediction for dynamic networks.
//!
//! The crate ingests sequences of graph snapshots, embeds them with spectral
//! methods for random dot product graphs (adjacency spectral embedding and
//! its directed, omnibus and common-subspace variants), fuses the snapshot
//! embeddings into link scores either by averaging or by forecasting with
//! seasonal autoregressive models, and evaluates predictions with subsampled
//! AUC.
//!
//! Entry points:
//! - [`graph`] — snapshot series, edge-list ingestion, sparse storage
//! - [`spectral`] — truncated eigendecomposition / SVD, rank selection
//! - [`embed`] — ASE, DASE, omnibus and MASE embeddings
//! - [`align`] — Procrustes and generalised Procrustes registration
//! - [`forecast`] — seasonal autoregressive (SARI) fitting and forecasting
//! - [`score`] — all link-score combiners
//! - [`eval`] — ROC/AUC, negative-class subsampling, difference CIs
//! - [`simulate`] — seasonal SBM, logistic dynamic model, GRDPG sampling
//! - [`pipeline`] — experiment orchestration used by the CLI and bindings

pub mod align;
pub mod embed;
pub mod error;
pub mod eval;
pub mod forecast;
pub mod graph;
pub mod pipeline;
pub mod score;
pub mod simulate;
pub mod spectral;

pub use error::{Error, Result};
