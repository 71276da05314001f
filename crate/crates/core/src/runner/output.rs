//! CSV tables, plot files and the JSON manifest, written by a single writer.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

/// One CSV cell. Floats are written with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Float)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
            Cell::Text(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Two-column whitespace-separated data.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub name: String,
    pub columns: (String, String),
    pub points: Vec<(f64, f64)>,
}

impl PlotData {
    pub fn new(name: &str, x: &str, y: &str, points: Vec<(f64, f64)>) -> Self {
        PlotData {
            name: name.to_string(),
            columns: (x.to_string(), y.to_string()),
            points,
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("# {} {}\n", self.columns.0, self.columns.1);
        for (x, y) in &self.points {
            let _ = writeln!(out, "{} {}", format_float(*x), format_float(*y));
        }
        out
    }
}

/// Everything an experiment produces, held in memory until the write.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    pub plots: Vec<PlotData>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    /// Seconds since the Unix epoch at write time.
    pub timestamp: u64,
    pub config: RunConfig,
    pub tables: Vec<FileEntry>,
    pub plots: Vec<FileEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Removes what it created unless disarmed.
struct Cleanup {
    files: Vec<PathBuf>,
    created_dir: Option<PathBuf>,
}

impl Drop for Cleanup {
    fn drop(&mut self) {
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if let Some(d) = &self.created_dir {
            let _ = fs::remove_dir(d);
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str, guard: &mut Cleanup) -> Result<String> {
    let path = dir.join(name);
    guard.files.push(path.clone());
    fs::write(&path, contents.as_bytes())?;
    Ok(sha256_hex(contents.as_bytes()))
}

/// Writes all artifacts and the manifest into `dir`. On any failure the files
/// written so far (and the directory, if it was created here) are removed.
pub fn write_artifacts(dir: &Path, config: &RunConfig, artifacts: &Artifacts) -> Result<Manifest> {
    let created_dir = if dir.exists() {
        if !dir.is_dir() {
            return Err(Error::Config {
                field: "output.dir".into(),
                constraint: format!("{} is not a directory", dir.display()),
            });
        }
        None
    } else {
        fs::create_dir_all(dir)?;
        Some(dir.to_path_buf())
    };
    let mut guard = Cleanup {
        files: Vec::new(),
        created_dir,
    };

    let mut tables = Vec::new();
    for t in &artifacts.tables {
        let file = format!("{}.csv", t.name);
        let sha256 = write_file(dir, &file, &t.to_csv(), &mut guard)?;
        tables.push(FileEntry {
            file,
            sha256,
            rows: t.rows.len(),
        });
    }
    let mut plots = Vec::new();
    for p in &artifacts.plots {
        let file = format!("{}.dat", p.name);
        let sha256 = write_file(dir, &file, &p.render(), &mut guard)?;
        plots.push(FileEntry {
            file,
            sha256,
            rows: p.points.len(),
        });
    }
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = Manifest {
        version: crate::VERSION.to_string(),
        timestamp,
        config: config.clone(),
        tables,
        plots,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Serialization(e.to_string()))?;
    write_file(dir, MANIFEST_FILE, &json, &mut guard)?;

    guard.files.clear();
    guard.created_dir = None;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    serde_json::from_str(&text).map_err(|e| Error::Serialization(e.to_string()))
}
