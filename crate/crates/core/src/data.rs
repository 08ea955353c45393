//! Stream sources: seeded synthetic random walks, seeded reshuffling into
//! trial streams, and CSV loading/writing for external datasets.
//!
//! CSV contract: comma-separated UTF-8, one instance per row, decimal point,
//! an optional single header line (detected by a non-numeric first row).
//! Written values carry 17 significant digits so they round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::Instance;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: file contains no data rows")]
    Empty { path: String },
    #[error("{path}: row {row} has {got} columns, expected {expected}")]
    Ragged {
        path: String,
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("{path}: row {row}, column {column}: `{cell}` is not a number")]
    NotNumeric {
        path: String,
        row: usize,
        column: usize,
        cell: String,
    },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Synthetic,
    File,
}

/// An `N × d` matrix of instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// The rows in their stored order as a stream.
    pub fn as_stream(&self) -> Vec<Instance> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| Instance::new(i + 1, r.clone()))
            .collect()
    }
}

/// Seeded generator shared by every random component.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Subtracts the mean and divides by the sample standard deviation
/// (`d − 1` denominator). Constant vectors become all zeros.
pub fn z_normalize(v: &mut [f64]) {
    let d = v.len();
    if d == 0 {
        return;
    }
    let mean = v.iter().sum::<f64>() / d as f64;
    let var = if d > 1 {
        v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (d - 1) as f64
    } else {
        0.0
    };
    let sd = var.sqrt();
    // relative test: rounding can leave a tiny spread on constant input
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    if sd <= 1e-12 * scale {
        v.iter_mut().for_each(|x| *x = 0.0);
    } else {
        v.iter_mut().for_each(|x| *x = (*x - mean) / sd);
    }
}

/// `n` random walks of `d` standard-normal steps each, z-normalized per walk.
pub fn generate_random_walks(n: usize, d: usize, seed: u64) -> Result<Dataset, DataError> {
    if n == 0 || d < 2 {
        return Err(DataError::InvalidParams(format!(
            "need N >= 1 and d >= 2, got N={n}, d={d}"
        )));
    }
    let mut rng = rng(seed);
    let rows = (0..n)
        .map(|_| {
            let mut acc = 0.0;
            let mut walk: Vec<f64> = (0..d)
                .map(|_| {
                    let step: f64 = StandardNormal.sample(&mut rng);
                    acc += step;
                    acc
                })
                .collect();
            z_normalize(&mut walk);
            walk
        })
        .collect();
    Ok(Dataset {
        name: format!("random-walks-n{n}-d{d}-s{seed}"),
        rows,
        provenance: Provenance::Synthetic,
    })
}

/// Uniform random permutation of `0..n` (Fisher–Yates from the top index
/// down, driven by [`rng`]).
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng(seed));
    order
}

/// A trial stream: the dataset's rows in a seeded random order, with stream
/// positions renumbered from 1.
pub fn reshuffle(dataset: &Dataset, seed: u64) -> Vec<Instance> {
    permutation(dataset.len(), seed)
        .into_iter()
        .enumerate()
        .map(|(pos, row)| Instance::new(pos + 1, dataset.rows[row].clone()))
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
    move |source| DataError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Loads a numeric CSV, one instance per row.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 1;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<Result<f64, &str>> = record
            .iter()
            .map(|cell| cell.parse::<f64>().map_err(|_| cell))
            .collect();
        if i == 0 && parsed.iter().any(Result::is_err) {
            // header line
            continue;
        }
        let expected = *width.get_or_insert(parsed.len());
        if parsed.len() != expected {
            return Err(DataError::Ragged {
                path: shown,
                row: line,
                got: parsed.len(),
                expected,
            });
        }
        let mut row = Vec::with_capacity(expected);
        for (col, cell) in parsed.into_iter().enumerate() {
            match cell {
                Ok(v) => row.push(v),
                Err(text) => {
                    return Err(DataError::NotNumeric {
                        path: shown,
                        row: line,
                        column: col + 1,
                        cell: text.to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DataError::Empty { path: shown });
    }
    let name = path
        .file_stem()
        .map_or_else(|| shown.clone(), |s| s.to_string_lossy().into_owned());
    Ok(Dataset {
        name,
        rows,
        provenance: Provenance::File,
    })
}

/// Writes the dataset as a header-less CSV with 17 significant digits.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    for row in &dataset.rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", line.join(",")).map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}
