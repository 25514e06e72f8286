//! Edge-list ingestion.
//!
//! Records are delimiter-separated lines `(time, source, destination)`;
//! lines starting with `#` are comments. Time keys may be arbitrary integers
//! or ISO dates and are mapped to 1..T by sorted rank.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{CsrMatrix, GraphKind, GraphKindTag, SnapshotSeries};

/// Column and delimiter description for an edge-list file.
#[derive(Debug, Clone)]
pub struct EdgeListSpec {
    /// Field delimiter; `None` splits on any run of whitespace.
    pub delimiter: Option<char>,
    /// Lines starting with this character are skipped.
    pub comment: char,
    pub time_col: usize,
    pub source_col: usize,
    pub dest_col: usize,
}

impl Default for EdgeListSpec {
    fn default() -> Self {
        EdgeListSpec {
            delimiter: None,
            comment: '#',
            time_col: 0,
            source_col: 1,
            dest_col: 2,
        }
    }
}

/// Declared node set. When present, labels outside the census are rejected;
/// otherwise unseen labels grow the node set in first-appearance order.
#[derive(Debug, Clone)]
pub struct NodeCensus {
    pub rows: Vec<String>,
    /// Destination-side labels, for bipartite graphs.
    pub cols: Option<Vec<String>>,
}

/// Integer time keys sort numerically; anything else sorts lexicographically
/// (which orders ISO-8601 dates chronologically).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum TimeKey {
    Int(i64),
    Text(String),
}

impl TimeKey {
    fn parse(tok: &str) -> TimeKey {
        match tok.parse::<i64>() {
            Ok(v) => TimeKey::Int(v),
            Err(_) => TimeKey::Text(tok.to_string()),
        }
    }
}

struct Interner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    frozen: bool,
}

impl Interner {
    fn new(census: Option<&[String]>) -> Self {
        let labels: Vec<String> = census.map(|c| c.to_vec()).unwrap_or_default();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Interner {
            labels,
            index,
            frozen: census.is_some(),
        }
    }

    fn intern(&mut self, label: &str, line: usize) -> Result<usize> {
        if let Some(&i) = self.index.get(label) {
            return Ok(i);
        }
        if self.frozen {
            return Err(Error::UnknownLabel {
                label: label.to_string(),
                line,
            });
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        Ok(i)
    }
}

/// Ingest a snapshot series from a text record source.
pub fn ingest_edge_list(
    reader: impl BufRead,
    spec: &EdgeListSpec,
    kind: GraphKindTag,
    census: Option<&NodeCensus>,
) -> Result<SnapshotSeries> {
    let mut rows = Interner::new(census.map(|c| c.rows.as_slice()));
    let mut cols = match kind {
        GraphKindTag::Bipartite => Some(Interner::new(census.and_then(|c| c.cols.as_deref()))),
        _ => {
            if census.is_some_and(|c| c.cols.is_some()) {
                return Err(Error::InvalidArgument(
                    "column census only applies to bipartite graphs".into(),
                ));
            }
            None
        }
    };

    let mut records: Vec<(TimeKey, usize, usize)> = Vec::new();
    for (line0, line) in reader.lines().enumerate() {
        let line_no = line0 + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(spec.comment) {
            continue;
        }
        let fields: Vec<&str> = match spec.delimiter {
            Some(d) => trimmed.split(d).map(str::trim).collect(),
            None => trimmed.split_whitespace().collect(),
        };
        let max_col = spec.time_col.max(spec.source_col).max(spec.dest_col);
        if fields.len() <= max_col {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected at least {} fields, found {}", max_col + 1, fields.len()),
            });
        }
        let time = fields[spec.time_col];
        if time.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty time field".into(),
            });
        }
        let src = fields[spec.source_col];
        let dst = fields[spec.dest_col];
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty node label".into(),
            });
        }
        let i = rows.intern(src, line_no)?;
        let j = match cols.as_mut() {
            Some(c) => c.intern(dst, line_no)?,
            None => rows.intern(dst, line_no)?,
        };
        records.push((TimeKey::parse(time), i, j));
    }

    // Map distinct time keys to 1..T by sorted rank.
    let mut keys: Vec<TimeKey> = records.iter().map(|(k, _, _)| k.clone()).collect();
    keys.sort();
    keys.dedup();
    let rank: HashMap<&TimeKey, usize> = keys.iter().enumerate().map(|(r, k)| (k, r)).collect();
    let t_count = keys.len();

    let n_rows = rows.labels.len();
    let n_cols = cols.as_ref().map(|c| c.labels.len()).unwrap_or(n_rows);
    let kind = match kind {
        GraphKindTag::Undirected => GraphKind::Undirected { n: n_rows },
        GraphKindTag::Directed => GraphKind::Directed { n: n_rows },
        GraphKindTag::Bipartite => GraphKind::Bipartite { n_rows, n_cols },
    };

    let mut per_t: Vec<Vec<(usize, usize)>> = vec![Vec::new(); t_count];
    for (key, i, j) in &records {
        let t = rank[key];
        if kind.is_unipartite() && i == j {
            // self-loops are dropped: unipartite adjacency matrices are hollow
            continue;
        }
        per_t[t].push((*i, *j));
        if kind.is_undirected() {
            per_t[t].push((*j, *i));
        }
    }

    let snapshots = per_t
        .into_iter()
        .map(|pairs| CsrMatrix::from_binary_pairs(n_rows, n_cols, pairs))
        .collect::<Result<Vec<_>>>()?;

    let col_labels = cols.map(|c| c.labels);
    SnapshotSeries::new(kind, rows.labels, col_labels, snapshots)
}

/// Convenience wrapper reading from a file path.
pub fn ingest_edge_list_path(
    path: impl AsRef<Path>,
    spec: &EdgeListSpec,
    kind: GraphKindTag,
    census: Option<&NodeCensus>,
) -> Result<SnapshotSeries> {
    let file = std::fs::File::open(path)?;
    ingest_edge_list(std::io::BufReader::new(file), spec, kind, census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn ingest(text: &str, kind: GraphKindTag) -> SnapshotSeries {
        ingest_edge_list(Cursor::new(text), &EdgeListSpec::default(), kind, None).unwrap()
    }

    #[test]
    fn duplicate_symmetric_records_collapse() {
        let s = ingest("1 a b\n1 b a\n2 a c\n", GraphKindTag::Undirected);
        assert_eq!(s.t_count(), 2);
        assert_eq!(s.kind(), GraphKind::Undirected { n: 3 });
        assert_eq!(s.snapshot(0).nnz(), 2); // {a,b} stored both ways
        assert_eq!(s.snapshot(0).get(0, 1), 1.0);
        assert_eq!(s.snapshot(0).get(1, 0), 1.0);
        assert_eq!(s.snapshot(1).get(0, 2), 1.0);
        assert_eq!(s.snapshot(1).nnz(), 2);
    }

    #[test]
    fn self_loops_dropped_for_unipartite() {
        let s = ingest("1 a a\n", GraphKindTag::Undirected);
        assert_eq!(s.kind(), GraphKind::Undirected { n: 1 });
        assert_eq!(s.snapshot(0).nnz(), 0);
    }

    #[test]
    fn matches_dense_accumulator_on_random_records() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        let labels = ["a", "b", "c", "d", "e"];
        let mut text = String::new();
        let mut recs = Vec::new();
        for _ in 0..20 {
            let t = rng.random_range(1..4i64);
            let i = rng.random_range(0..5usize);
            let j = rng.random_range(0..5usize);
            text.push_str(&format!("{t} {} {}\n", labels[i], labels[j]));
            recs.push((t, labels[i].to_string(), labels[j].to_string()));
        }
        let s = ingest(&text, GraphKindTag::Directed);
        // Dense accumulator over the same records.
        let mut idx: std::collections::HashMap<String, usize> = Default::default();
        for (_, a, b) in &recs {
            for l in [a, b] {
                let next = idx.len();
                idx.entry(l.clone()).or_insert(next);
            }
        }
        let n = idx.len();
        let mut times: Vec<i64> = recs.iter().map(|r| r.0).collect();
        times.sort();
        times.dedup();
        let mut dense = vec![ndarray::Array2::<f64>::zeros((n, n)); times.len()];
        for (t, a, b) in &recs {
            let (i, j) = (idx[a], idx[b]);
            if i != j {
                let slot = times.iter().position(|x| x == t).unwrap();
                dense[slot][[i, j]] = 1.0;
            }
        }
        assert_eq!(s.t_count(), times.len());
        for (t0, want) in dense.iter().enumerate() {
            assert_eq!(&s.snapshot(t0).to_dense(), want);
        }
    }

    #[test]
    fn census_rejects_unknown_labels() {
        let census = NodeCensus {
            rows: vec!["a".into(), "b".into()],
            cols: None,
        };
        let err = ingest_edge_list(
            Cursor::new("1 a z\n"),
            &EdgeListSpec::default(),
            GraphKindTag::Undirected,
            Some(&census),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { ref label, line: 1 } if label == "z"));
    }

    #[test]
    fn malformed_record_reports_line() {
        let err = ingest_edge_list(
            Cursor::new("1 a b\n2 c\n"),
            &EdgeListSpec::default(),
            GraphKindTag::Undirected,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn iso_dates_order_chronologically() {
        let s = ingest(
            "2020-02-01 a b\n2020-01-15 b c\n2020-01-15 a c\n",
            GraphKindTag::Undirected,
        );
        assert_eq!(s.t_count(), 2);
        // first snapshot is the January one
        assert_eq!(s.snapshot(0).get(1, 2), 1.0);
        assert_eq!(s.snapshot(0).get(0, 1), 0.0);
        assert_eq!(s.snapshot(1).get(0, 1), 1.0);
    }

    #[test]
    fn bipartite_uses_two_namespaces() {
        let s = ingest("1 u1 h1\n1 u2 h1\n2 u1 u1\n", GraphKindTag::Bipartite);
        // "u1" on the destination side is a distinct node from source "u1"
        assert_eq!(
            s.kind(),
            GraphKind::Bipartite {
                n_rows: 2,
                n_cols: 2
            }
        );
        assert_eq!(s.snapshot(1).get(0, 1), 1.0);
    }
}
