//! Deterministic output writers. Primary CSV/JSON payloads are
//! byte-reproducible under a fixed seed; wall-clock metadata is segregated
//! into `run_meta.json`, the one file allowed to differ between runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::config(format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

/// Where one command run writes its files.
pub struct OutputDir {
    dir: PathBuf,
    pub format: Format,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path, format: Format) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), format, written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        std::fs::write(&path, text)?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::config(format!("serialize {name}: {e}")))?;
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Write a table in the selected format: `name.csv` or `name.json`.
    pub fn write_table(&mut self, name: &str, table: &Table) -> Result<PathBuf, CliError> {
        match self.format {
            Format::Csv => self.write_text(&format!("{name}.csv"), &table.to_csv()),
            Format::Json => self.write_json(&format!("{name}.json"), &table.to_json()),
        }
    }

    /// Record run metadata (timestamp lives only here).
    pub fn write_meta(&mut self, command: &str, seed: u64, config_text: &str) -> Result<(), CliError> {
        #[derive(Serialize)]
        struct Meta<'a> {
            command: &'a str,
            seed: u64,
            unix_time_secs: u64,
            files: Vec<String>,
            config: &'a str,
        }
        let files = self
            .written
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect();
        let meta = Meta {
            command,
            seed,
            unix_time_secs: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            files,
            config: config_text,
        };
        let text = serde_json::to_string_pretty(&meta)
            .map_err(|e| CliError::config(format!("serialize meta: {e}")))?;
        std::fs::write(self.path("run_meta.json"), text + "\n")?;
        Ok(())
    }
}

/// A simple column-ordered table rendered to CSV or JSON rows.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::UInt(v as u64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format!("{v}"),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::UInt(v) => (*v).into(),
            Cell::Float(v) => serde_json::json!(v),
            Cell::Text(v) => v.clone().into(),
            Cell::Bool(v) => (*v).into(),
        }
    }
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert((*col).to_string(), cell.to_json());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Trajectory dump: metadata comment lines, then `time,state` rows.
pub fn trajectory_csv(
    model_name: &str,
    params_desc: &str,
    traj: &landmod::Trajectory,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# model: {model_name}");
    let _ = writeln!(out, "# params: {params_desc}");
    let _ = writeln!(
        out,
        "# seed: {} stream: {} x0: {} horizon: {}",
        traj.seed.seed, traj.seed.stream, traj.x0, traj.horizon
    );
    let _ = writeln!(out, "time,state");
    let _ = writeln!(out, "0,{}", traj.x0);
    for &(t, x) in &traj.events {
        let _ = writeln!(out, "{t},{x}");
    }
    out
}
