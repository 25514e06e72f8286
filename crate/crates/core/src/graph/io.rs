//! On-disk format for snapshot series: a directory with a JSON manifest and
//! one sparse-triplet file per snapshot (`i j` zero-based, row-major sorted).

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CsrMatrix, GraphKind, SnapshotSeries};

#[derive(Serialize, Deserialize)]
struct SeriesManifest {
    #[serde(flatten)]
    kind: GraphKind,
    t_count: usize,
    row_labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<String>>,
}

fn snapshot_file(t0: usize) -> String {
    format!("snapshot_{:05}.txt", t0 + 1)
}

/// Write `series` into `dir` (created if missing).
pub fn save_series(series: &SnapshotSeries, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let manifest = SeriesManifest {
        kind: series.kind(),
        t_count: series.t_count(),
        row_labels: series.row_labels().to_vec(),
        col_labels: series.col_labels().map(|c| c.to_vec()),
    };
    let file = fs::File::create(dir.join("manifest.json"))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
    for t0 in 0..series.t_count() {
        let mut w = BufWriter::new(fs::File::create(dir.join(snapshot_file(t0)))?);
        for (i, j, _) in series.snapshot(t0).iter() {
            writeln!(w, "{i} {j}")?;
        }
    }
    Ok(())
}

/// Load a series previously written by [`save_series`].
pub fn load_series(dir: impl AsRef<Path>) -> Result<SnapshotSeries> {
    let dir = dir.as_ref();
    let manifest: SeriesManifest =
        serde_json::from_reader(BufReader::new(fs::File::open(dir.join("manifest.json"))?))?;
    let (nr, nc) = manifest.kind.shape();
    let mut snapshots = Vec::with_capacity(manifest.t_count);
    for t0 in 0..manifest.t_count {
        let path = dir.join(snapshot_file(t0));
        let reader = BufReader::new(fs::File::open(&path)?);
        let mut pairs = Vec::new();
        for (line0, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|s| s.parse().ok()).ok_or(Error::Parse {
                    line: line0 + 1,
                    message: format!("bad triplet line in {}", path.display()),
                })
            };
            pairs.push((parse(it.next())?, parse(it.next())?));
        }
        snapshots.push(CsrMatrix::from_binary_pairs(nr, nc, pairs)?);
    }
    SnapshotSeries::new(
        manifest.kind,
        manifest.row_labels,
        manifest.col_labels,
        snapshots,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ingest_edge_list, EdgeListSpec, GraphKindTag};
    use std::io::Cursor;

    #[test]
    fn ingest_save_load_roundtrip() {
        let text = "1 a b\n1 b c\n2 a c\n3 b a\n";
        let series = ingest_edge_list(
            Cursor::new(text),
            &EdgeListSpec::default(),
            GraphKindTag::Undirected,
            None,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_series(&series, dir.path()).unwrap();
        let back = load_series(dir.path()).unwrap();
        assert_eq!(series, back);
    }

    #[test]
    fn bipartite_roundtrip() {
        let text = "1 u1 h1\n2 u2 h2\n2 u1 h2\n";
        let series = ingest_edge_list(
            Cursor::new(text),
            &EdgeListSpec::default(),
            GraphKindTag::Bipartite,
            None,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_series(&series, dir.path()).unwrap();
        assert_eq!(load_series(dir.path()).unwrap(), series);
    }
}
