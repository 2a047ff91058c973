use crate::args::Format;
use serde::Serialize;
use serde_json::Value;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Everything that determines an artifact. The thread count is left out on
/// purpose: artifacts must not depend on it.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub out: Option<String>,
    pub format: Format,
}

/// A CSV cell. Floats are written with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Config comment line, header, rows; LF endings.
    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut s = format!("# {}\n", serde_json::to_string(config).expect("config serializes"));
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Adds the run config to each summary object.
pub fn with_config(mut summary: Value, config: &RunConfig) -> Value {
    let cfg = serde_json::to_value(config).expect("config serializes");
    if let Value::Object(map) = &mut summary {
        map.insert("config".into(), cfg);
    }
    summary
}

/// Path of the JSON summary written next to a CSV artifact.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the artifacts of one run.
///
/// `summaries` are JSON objects without the config; `table` is the CSV data.
/// csv: table to `out` (or stdout) and summaries to the sidecar.
/// json: one object, or an array for several summaries.
/// jsonl: one line per summary, appended.
pub fn emit(config: &RunConfig, out: Option<&Path>, summaries: Vec<Value>, table: &Table) -> io::Result<()> {
    let summaries: Vec<Value> = summaries.into_iter().map(|s| with_config(s, config)).collect();
    let json_doc = || -> String {
        let v = if summaries.len() == 1 { summaries[0].clone() } else { Value::Array(summaries.clone()) };
        serde_json::to_string_pretty(&v).expect("summary serializes") + "\n"
    };
    match config.format {
        Format::Csv => {
            let csv = table.to_csv(config);
            match out {
                Some(path) => {
                    std::fs::write(path, csv)?;
                    std::fs::write(sidecar_path(path), json_doc())?;
                }
                None => io::stdout().lock().write_all(csv.as_bytes())?,
            }
        }
        Format::Json => write_or_print(out, &json_doc())?,
        Format::Jsonl => {
            let mut lines = String::new();
            for s in &summaries {
                lines.push_str(&serde_json::to_string(s).expect("summary serializes"));
                lines.push('\n');
            }
            match out {
                Some(path) => OpenOptions::new().create(true).append(true).open(path)?.write_all(lines.as_bytes())?,
                None => io::stdout().lock().write_all(lines.as_bytes())?,
            }
        }
    }
    Ok(())
}

fn write_or_print(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RunConfig {
        RunConfig {
            command: "cdf".into(),
            params: serde_json::json!({"tol": 1e-8}),
            seed: 7,
            out: None,
            format: Format::Csv,
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["x", "F", "ok"]);
        t.push(vec![Cell::Float(0.1), Cell::Float(1.0 / 3.0), Cell::Bool(true)]);
        t.push(vec![Cell::Int(3), Cell::Empty, Cell::Bool(false)]);
        let csv = t.to_csv(&config());
        let lines: Vec<&str> = csv.split('\n').collect();
        assert!(lines[0].starts_with("# {") && lines[0].contains("\"seed\":7"));
        assert_eq!(lines[1], "x,F,ok");
        assert_eq!(lines[2], "1.0000000000000001e-1,3.3333333333333331e-1,true");
        assert_eq!(lines[3], "3,,false");
        assert_eq!(lines[4], "");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt() * 1e-300, -123456.789] {
            let s = Cell::Float(v).render();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("a/g.csv")), PathBuf::from("a/g.csv.json"));
    }
}
