// Copyright 2026 The floquet-clifford Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.


//! Output files: curves as CSV or JSON tables, reports and run metadata as JSON.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

/// `<crate version>+<git revision>`.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+", env!("FLOQUET_GIT_REV"));

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Text(v) => f.write_str(v),
        }
    }
}

impl From<&Cell> for Value {
    fn from(c: &Cell) -> Value {
        match c {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(v) => json!(v),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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

/// A named table of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct Stamp<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
}

/// Writes the files of one run into a directory.
pub struct Writer<'a> {
    dir: PathBuf,
    config: &'a RunConfig,
    pub written: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    pub fn new(dir: &Path, config: &'a RunConfig) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            config,
            written: Vec::new(),
        })
    }

    fn stamp(&self) -> Stamp<'_> {
        Stamp {
            tool: "floquet",
            version: VERSION,
            config: self.config,
        }
    }

    fn create(&mut self, file: String) -> std::io::Result<fs::File> {
        let path = self.dir.join(file);
        let f = fs::File::create(&path)?;
        self.written.push(path);
        Ok(f)
    }

    /// Curve output in the configured format. CSV files start with one `#` line holding the
    /// configuration.
    pub fn table(&mut self, t: &Table) -> std::io::Result<()> {
        match self.config.format {
            Format::Csv => {
                let stamp = serde_json::to_string(&self.stamp())?;
                let mut f = self.create(format!("{}.csv", t.name))?;
                writeln!(f, "# {stamp}")?;
                let mut w = csv::Writer::from_writer(f);
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(|c| c.to_string()))?;
                }
                w.flush()
            }
            Format::Json => {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            t.columns
                                .iter()
                                .zip(r)
                                .map(|(k, c)| (k.to_string(), Value::from(c)))
                                .collect(),
                        )
                    })
                    .collect();
                let doc = json!({ "stamp": self.stamp(), "columns": t.columns, "rows": rows });
                let f = self.create(format!("{}.json", t.name))?;
                write_json(f, &doc)
            }
        }
    }

    /// Structured report, always JSON.
    pub fn report<T: Serialize>(&mut self, name: &str, report: &T) -> std::io::Result<()> {
        let doc = json!({ "stamp": self.stamp(), "report": report });
        let f = self.create(format!("{name}.json"))?;
        write_json(f, &doc)
    }

    /// Run record: configuration, timing, files, diagnostics. Not reproducible by design.
    pub fn metadata(&mut self, threads: usize, seconds: f64, warnings: &[String]) -> std::io::Result<()> {
        let files: Vec<String> = self
            .written
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        let started = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs_f64() - seconds)
            .unwrap_or(0.0);
        let doc = json!({
            "stamp": self.stamp(),
            "threads": threads,
            "started_unix": started,
            "wall_clock_seconds": seconds,
            "files": files,
            "warnings": warnings,
        });
        let f = self.create("metadata.json".into())?;
        write_json(f, &doc)
    }
}

fn write_json(mut f: fs::File, v: &Value) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut f, v)?;
    writeln!(f)
}

/// Reads the configuration embedded in any output file of a previous run.
pub fn embedded_config(path: &Path) -> Result<RunConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let stamp: Value = if let Some(line) = text.lines().next().and_then(|l| l.strip_prefix("# ")) {
        serde_json::from_str(line).map_err(|e| e.to_string())?
    } else {
        let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        doc.get("stamp").cloned().ok_or("no stamp in file")?
    };
    let config = stamp.get("config").cloned().ok_or("no config in stamp")?;
    serde_json::from_value(config).map_err(|e| e.to_string())
}
