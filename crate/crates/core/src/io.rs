// SPDX-License-Identifier: MIT OR Apache-2.0

//! CSV datasets, JSON sidecars, and atomic file output.
//!
//! Dataset files are UTF-8, comma separated, with a header row. Numbers are
//! written with the shortest representation that parses back to the same
//! `f64`, so a write followed by a read reproduces the dataset exactly.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{MinMaxScaling, TimeSeriesDataset};
use crate::error::{Error, Result};

/// How to map CSV columns onto a dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub target_col: String,
    /// True-mean column; `None` reads `eta` when the header has it.
    #[serde(default)]
    pub eta_col: Option<String>,
    #[serde(default)]
    pub old_cols: Option<Vec<String>>,
    #[serde(default)]
    pub new_cols: Option<Vec<String>>,
    /// Response bound; `None` uses `max(1, max |y|)`.
    #[serde(default)]
    pub bound: Option<f64>,
}

impl Default for DatasetSchema {
    fn default() -> Self {
        Self {
            target_col: "y".into(),
            eta_col: None,
            old_cols: None,
            new_cols: None,
            bound: None,
        }
    }
}

/// A dataset read from disk with its feature column names (old block first).
#[derive(Clone, Debug)]
pub struct LoadedDataset {
    pub data: TimeSeriesDataset,
    pub feature_names: Vec<String>,
}

/// Sidecar written next to generated datasets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    /// Generator settings, as given.
    pub spec: serde_json::Value,
    pub feasibility_scale: f64,
    pub seed: u64,
    pub replicate: usize,
    pub true_split: usize,
    pub old_columns: Vec<String>,
    pub new_columns: Vec<String>,
    /// Original generator input index of each feature column.
    pub column_order: Vec<usize>,
    pub normalization: MinMaxScaling,
    pub bound: f64,
}

/// `<dir>/<stem>.meta.json` for a dataset path.
pub fn metadata_path(path: &Path) -> PathBuf {
    sibling(path, "meta.json")
}

/// `<dir>/<stem>.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// Writes through a temporary file in the destination directory and renames
/// it into place once `fill` succeeds.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::io(path, e.into()))?;
        writeln!(w).map_err(|e| Error::io(path, e))
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: format!("{}: {e}", path.display()),
    })
}

/// Writes `t,<features>,y[,eta]` with one row per time step.
pub fn write_dataset_csv(path: &Path, data: &TimeSeriesDataset, feature_names: &[String]) -> Result<()> {
    if feature_names.len() != data.num_features() {
        return Err(Error::invalid("one name per feature column is required"));
    }
    write_atomic(path, |w| write_dataset(w, data, feature_names).map_err(|e| Error::io(path, e)))
}

fn write_dataset(w: &mut dyn Write, data: &TimeSeriesDataset, names: &[String]) -> std::io::Result<()> {
    write!(w, "t")?;
    for n in names {
        write!(w, ",{n}")?;
    }
    write!(w, ",y")?;
    if data.eta().is_some() {
        write!(w, ",eta")?;
    }
    writeln!(w)?;
    for i in 0..data.len() {
        write!(w, "{}", i + 1)?;
        for v in data.row(i) {
            write!(w, ",{v}")?;
        }
        write!(w, ",{}", data.targets()[i])?;
        if let Some(eta) = data.eta() {
            write!(w, ",{}", eta[i])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Default feature names `x1..xn`.
pub fn default_feature_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn column(header: &csv::StringRecord, name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::invalid(format!("column '{name}' not found in header")))
}

/// Reads a dataset. Every column other than `t`, the target, and the true
/// mean is a feature; the old/new partition must cover them exactly.
pub fn read_dataset_csv(path: &Path, schema: &DatasetSchema) -> Result<LoadedDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let parse_err = |e: csv::Error| match e.kind() {
        csv::ErrorKind::Io(_) => Error::io(path, std::io::Error::other(e.to_string())),
        _ => Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        },
    };
    let header = reader.headers().map_err(parse_err)?.clone();
    let target = column(&header, &schema.target_col)?;
    let eta = match &schema.eta_col {
        Some(name) => Some(column(&header, name)?),
        None => header.iter().position(|h| h == "eta"),
    };
    let features: Vec<usize> = (0..header.len())
        .filter(|&i| i != target && Some(i) != eta && &header[i] != "t")
        .collect();
    let names: Vec<&str> = features.iter().map(|&i| &header[i]).collect();
    let (old, new) = partition(&names, schema.old_cols.as_deref(), schema.new_cols.as_deref())?;
    let order: Vec<usize> = old.iter().chain(&new).map(|n| features[names.iter().position(|x| x == n).unwrap()]).collect();

    let mut flat = Vec::new();
    let mut y = Vec::new();
    let mut eta_values = eta.map(|_| Vec::new());
    for (row_idx, rec) in reader.records().enumerate() {
        let rec = rec.map_err(parse_err)?;
        let line = rec.position().map_or(row_idx as u64 + 2, |p| p.line());
        let value = |col: usize| -> Result<f64> {
            let raw = rec.get(col).unwrap_or("");
            let v: f64 = raw.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("column '{}' holds '{raw}', not a number", &header[col]),
            })?;
            if v.is_nan() {
                return Err(Error::invalid(format!("row {} (line {line}): column '{}' is NaN", row_idx + 1, &header[col])));
            }
            Ok(v)
        };
        for &c in &order {
            flat.push(value(c)?);
        }
        y.push(value(target)?);
        if let (Some(col), Some(values)) = (eta, eta_values.as_mut()) {
            values.push(value(col)?);
        }
    }
    if y.is_empty() {
        return Err(Error::invalid(format!("{} has no data rows", path.display())));
    }
    let bound = schema
        .bound
        .unwrap_or_else(|| y.iter().chain(eta_values.iter().flatten()).fold(1.0f64, |b, v| b.max(v.abs())));
    if old.is_empty() && new.is_empty() {
        // Target-only files get a constant zero feature.
        let m = y.len();
        let data = TimeSeriesDataset::from_flat(vec![0.0; m], y, eta_values, 1, 0, bound)?;
        return Ok(LoadedDataset {
            data,
            feature_names: vec!["zero".into()],
        });
    }
    if old.is_empty() {
        return Err(Error::invalid("at least one old feature column is required"));
    }
    let data = TimeSeriesDataset::from_flat(flat, y, eta_values, old.len(), new.len(), bound)?;
    Ok(LoadedDataset {
        data,
        feature_names: old.into_iter().chain(new).collect(),
    })
}

fn partition(names: &[&str], old: Option<&[String]>, new: Option<&[String]>) -> Result<(Vec<String>, Vec<String>)> {
    let known: HashSet<&str> = names.iter().copied().collect();
    for n in old.into_iter().flatten().chain(new.into_iter().flatten()) {
        if !known.contains(n.as_str()) {
            return Err(Error::invalid(format!("feature column '{n}' not found in header")));
        }
    }
    let rest = |taken: &[String]| -> Vec<String> {
        names.iter().filter(|n| !taken.iter().any(|t| t == *n)).map(|n| n.to_string()).collect()
    };
    let (old, new) = match (old, new) {
        (None, None) => (rest(&[]), Vec::new()),
        (Some(o), None) => (o.to_vec(), rest(o)),
        (None, Some(n)) => (rest(n), n.to_vec()),
        (Some(o), Some(n)) => (o.to_vec(), n.to_vec()),
    };
    let mut seen = HashSet::new();
    for n in old.iter().chain(&new) {
        if !seen.insert(n.as_str()) {
            return Err(Error::invalid(format!("feature column '{n}' appears more than once in the partition")));
        }
    }
    if seen.len() != names.len() {
        return Err(Error::invalid("old and new columns must cover every feature column"));
    }
    Ok((old, new))
}
