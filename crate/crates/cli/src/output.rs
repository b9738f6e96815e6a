//! CSV and JSON writers. Every file starts with the resolved configuration.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Fifteen significant digits, positional for moderate exponents.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).expect("exponent");
    if (-5..15).contains(&exp) {
        format!("{x:.*}", (14 - exp) as usize)
    } else {
        sci
    }
}

/// Column-oriented table of preformatted cells.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Output {
    path: Option<PathBuf>,
    pub format: Format,
    config: RunConfig,
}

impl Output {
    pub fn new(path: Option<PathBuf>, format: Format, config: RunConfig) -> Self {
        Output { path, format, config }
    }

    /// `out.csv` with suffix `roots` and extension `json` becomes `out.roots.json`.
    fn sidecar(path: &Path, suffix: &str, ext: &str) -> PathBuf {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        path.with_file_name(format!("{stem}.{suffix}.{ext}"))
    }

    fn sink(&self, suffix: Option<&str>, ext: &str) -> CliResult<Option<Box<dyn Write>>> {
        if let Some(dir) = self.path.as_deref().and_then(Path::parent).filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        Ok(match (&self.path, suffix) {
            (None, None) => Some(Box::new(std::io::stdout().lock())),
            // secondary files need a named primary output
            (None, Some(_)) => None,
            (Some(p), None) => Some(Box::new(std::fs::File::create(p)?)),
            (Some(p), Some(s)) => Some(Box::new(std::fs::File::create(Self::sidecar(p, s, ext))?)),
        })
    }

    pub fn config_json(&self) -> Value {
        Value::Object(self.config.entries().map(|(k, v)| (k.to_string(), json!(v))).collect::<Map<_, _>>())
    }

    pub fn write_csv(&self, suffix: Option<&str>, table: &Table) -> CliResult<()> {
        let Some(mut sink) = self.sink(suffix, "csv")? else {
            return Ok(());
        };
        for (k, v) in self.config.entries() {
            writeln!(sink, "# {k} = {v}")?;
        }
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `body` merged with a `config` entry.
    pub fn write_json(&self, suffix: Option<&str>, body: Value) -> CliResult<()> {
        let Some(mut sink) = self.sink(suffix, "json")? else {
            return Ok(());
        };
        let mut doc = Map::new();
        doc.insert("config".into(), self.config_json());
        match body {
            Value::Object(m) => doc.extend(m),
            other => {
                doc.insert("data".into(), other);
            }
        }
        serde_json::to_writer_pretty(&mut sink, &Value::Object(doc))?;
        writeln!(sink)?;
        Ok(())
    }
}
