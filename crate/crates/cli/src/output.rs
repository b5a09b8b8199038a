//! Records, tables and their CSV / JSON serialization.

use serde_json::{Map, Value};
use squeezing::validate::{Bound, Check};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Exit statuses of the command line.
#[derive(Debug)]
pub enum Failure {
    /// Invalid arguments or parameters outside a function's domain (2).
    Usage(String),
    /// A check did not hold (3).
    Disagreement,
    /// An iteration or truncated sum did not reach its target (4).
    NonConvergence(String),
}

impl Failure {
    pub fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Usage(_) => 2,
            Failure::Disagreement => 3,
            Failure::NonConvergence(_) => 4,
        })
    }
}

impl From<squeezing::Error> for Failure {
    fn from(e: squeezing::Error) -> Self {
        use squeezing::Error as E;
        match e {
            E::Domain { .. } | E::Overflow { .. } => Failure::Usage(e.to_string()),
            E::NonConvergence { .. } | E::CutoffExceeded { .. } | E::NonTerminating { .. } => {
                Failure::NonConvergence(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Two-column `quantity,value` table.
    pub fn scalars(items: &[(&str, f64)]) -> Self {
        let mut t = Table::new(&["quantity", "value"]);
        for &(k, v) in items {
            t.push(vec![k.into(), v.into()]);
        }
        t
    }
}

/// Result of one command: echoed inputs, outputs, checks and a CSV view.
#[derive(Debug)]
pub struct Record {
    pub command: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub table: Table,
    /// Human-readable line for stderr in CSV mode.
    pub summary: Option<String>,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn check_at_most(name: impl Into<String>, value: f64, bound: f64, at: Option<String>) -> Check {
    Check {
        name: name.into(),
        criterion: None,
        passed: value <= bound,
        value,
        bound,
        kind: Bound::AtMost,
        points: 1,
        worst_point: at,
        error: None,
    }
}

pub fn check_at_least(name: impl Into<String>, value: f64, bound: f64) -> Check {
    Check {
        name: name.into(),
        criterion: None,
        passed: value >= bound,
        value,
        bound,
        kind: Bound::AtLeast,
        points: 1,
        worst_point: None,
        error: None,
    }
}

/// 17 significant digits.
pub fn real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn to_csv(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        let fields = row.iter().map(|c| match c {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => real(*x),
            Cell::Text(s) => s.clone(),
        });
        w.write_record(fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn to_json(record: &Record, timing: Option<f64>) -> String {
    let mut top = Map::new();
    top.insert("command".into(), Value::from(record.command));
    top.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    top.insert("inputs".into(), record.inputs.clone());
    top.insert("outputs".into(), record.outputs.clone());
    top.insert("checks".into(), serde_json::to_value(&record.checks).expect("checks serialize"));
    top.insert("passed".into(), Value::from(record.passed()));
    if let Some(t) = timing {
        top.insert("timing_seconds".into(), Value::from(t));
    }
    let mut out = String::new();
    write_json(&mut out, &Value::Object(top), 0);
    out.push('\n');
    out
}

fn write_json(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{}", real(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_json(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}
