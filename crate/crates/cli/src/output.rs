//! Table rendering to CSV and JSON, and run manifests.
//!
//! Floats are written with 17 significant digits; non-finite values become
//! empty CSV fields or JSON `null`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "tricritical";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
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

pub fn format_float(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

/// JSON number with the fixed 17-digit rendering, or `null`.
pub fn num(v: f64) -> Value {
    match format_float(v) {
        Some(s) => Value::Number(Number::from_str(&s).expect("formatted float is valid JSON")),
        None => Value::Null,
    }
}

pub fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v).unwrap_or_default(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// The reproducibility record carried by every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub tolerances: Tolerances,
}

pub type Tolerances = BTreeMap<&'static str, f64>;

impl Manifest {
    pub fn new<C: Serialize>(command: &'static str, config: &C, tolerances: Tolerances) -> CliResult<Self> {
        let config = serde_json::to_value(config).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self { tool: TOOL, version: VERSION, command, config, tolerances })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub manifest: Manifest,
    pub summary: Option<Value>,
    pub table: Table,
}

impl Report {
    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("manifest".into(), serde_json::to_value(&self.manifest).map_err(|e| CliError::Io(e.to_string()))?);
                if let Some(s) = &self.summary {
                    obj.insert("summary".into(), s.clone());
                }
                obj.insert("data".into(), self.table.to_json_rows());
                let mut text = serde_json::to_string_pretty(&Value::Object(obj)).map_err(|e| CliError::Io(e.to_string()))?;
                text.push('\n');
                Ok(text.into_bytes())
            }
        }
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.toml");
    PathBuf::from(name)
}

/// Sidecar manifest: the resolved configuration at top level, so the file
/// can be passed back with `--config`, plus a `[run]` table with timestamps.
pub fn manifest_toml(config: toml::Table, manifest: &Manifest, started: &str, finished: &str, output: &Path) -> CliResult<String> {
    let mut run = toml::Table::new();
    run.insert("tool".into(), TOOL.into());
    run.insert("version".into(), VERSION.into());
    run.insert("command".into(), manifest.command.into());
    run.insert("output".into(), output.display().to_string().into());
    run.insert("started".into(), started.into());
    run.insert("finished".into(), finished.into());
    let tolerances: toml::Table = manifest.tolerances.iter().map(|(k, v)| (k.to_string(), toml::Value::Float(*v))).collect();
    run.insert("tolerances".into(), toml::Value::Table(tolerances));
    let mut table = config;
    table.insert("run".into(), toml::Value::Table(run));
    toml::to_string(&table).map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789, f64::MIN_POSITIVE] {
            let s = format_float(v).unwrap();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(0.5).unwrap(), "5.0000000000000000e-1");
        assert!(format_float(f64::INFINITY).is_none());
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(0.5).to_string(), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_leaves_missing_values_empty() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::Num(1.0), Cell::Empty, Cell::Num(f64::INFINITY)]);
        assert_eq!(String::from_utf8(t.to_csv().unwrap()).unwrap(), "a,b,c\n1.0000000000000000e0,,\n");
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(manifest_path(Path::new("out/run.csv")), PathBuf::from("out/run.csv.manifest.toml"));
    }
}
