//! Columnar results and their CSV/JSON renderings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Schema identifier written into every output.
pub const SCHEMA: &str = "phaselock-columnar/1";

/// Rectangular table of numbers plus a metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Scalar results that do not fit the columns (fitted slopes, regimes, …).
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// Provenance of a table: the command and its canonical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: String,
    /// Canonical JSON of the subcommand parameters and seed.
    pub config: String,
}

impl Metadata {
    pub fn new(command: &str, params: &Value, seed: u64) -> Self {
        let config = json!({ "command": command, "params": params, "seed": seed }).to_string();
        Self {
            command: command.to_string(),
            config,
        }
    }

    pub fn config_hash(&self) -> String {
        Sha256::digest(self.config.as_bytes())
            .iter()
            .fold(String::with_capacity(64), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
    }
}

/// 12 significant digits, shortest form that reads back to the rounded value.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn render_csv(table: &Table, meta: &Metadata) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# command: {}", meta.command);
    let _ = writeln!(out, "# version: {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# schema: {SCHEMA}");
    let _ = writeln!(out, "# config: {}", meta.config);
    let _ = writeln!(out, "# config_sha256: {}", meta.config_hash());
    for (k, v) in &table.notes {
        let _ = writeln!(out, "# {k}: {v}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn json_number(x: f64) -> Value {
    let s = format_number(x);
    // JSON has no NaN/inf; keep them as strings
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .and_then(|_| serde_json::from_str(&s).ok())
        .unwrap_or(Value::String(s))
}

pub fn render_json(table: &Table, meta: &Metadata) -> String {
    let config: Value = serde_json::from_str(&meta.config).expect("config is JSON");
    let notes: Map<String, Value> = table
        .notes
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(|&x| json_number(x)).collect()))
        .collect();
    let doc = json!({
        "metadata": {
            "command": meta.command,
            "version": env!("CARGO_PKG_VERSION"),
            "schema": SCHEMA,
            "config": config,
            "config_sha256": meta.config_hash(),
            "notes": notes,
        },
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
