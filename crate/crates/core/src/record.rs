//! CSV result rows.

use std::fs::File;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "k",
    "c",
    "s",
    "algo",
    "seed",
    "total_moves",
    "max_moves",
    "max_label",
    "label_sum",
    "outcome",
    "wall_ns",
];

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("unexpected CSV header {0:?}")]
    Header(Vec<String>),
}

/// One (instance, algorithm) run.
///
/// Matching runs reuse the same columns: `n` is the right side, `k` the
/// largest left degree, `c` the left/right ratio, and `outcome` reads
/// `matched=<size>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub s: usize,
    pub algo: String,
    pub seed: u64,
    pub total_moves: u64,
    pub max_moves: u64,
    pub max_label: usize,
    pub label_sum: u64,
    pub outcome: String,
    pub wall_ns: u64,
}

impl RunRecord {
    /// Matching size encoded in the `outcome` column of a matching row.
    pub fn matched_size(&self) -> Option<usize> {
        self.outcome.strip_prefix("matched=")?.parse().ok()
    }
}

pub fn write_csv_to<W: io::Write>(writer: W, rows: &[RunRecord]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(rows: &[RunRecord], path: impl AsRef<Path>) -> Result<(), RecordError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| RecordError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv_to(file, rows).map_err(|source| RecordError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv_from<R: io::Read>(reader: R) -> Result<Vec<RunRecord>, csv::Error> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().collect()
}

/// Reads a results file, rejecting any header other than [`CSV_HEADER`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>, RecordError> {
    let path = path.as_ref();
    let csv_err = |source| RecordError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header: Vec<String> = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(String::from)
        .collect();
    if header != CSV_HEADER {
        return Err(RecordError::Header(header));
    }
    r.deserialize().collect::<Result<_, _>>().map_err(csv_err)
}
