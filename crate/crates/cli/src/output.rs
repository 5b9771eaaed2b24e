use serde_json::{json, Map, Value};

use crate::Format;

/// What a subcommand produced: the parameter echo plus one object per result line.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub rows: Vec<Value>,
    /// `false` turns a completed run into exit code 1 (failing verification).
    pub pass: bool,
}

impl Report {
    pub fn new(command: &'static str, params: Map<String, Value>) -> Self {
        Self { command, params, rows: Vec::new(), pass: true }
    }

    pub fn row(mut self, v: Value) -> Self {
        self.rows.push(v);
        self
    }
}

fn lines(report: &Report, seed: u64) -> Vec<Value> {
    let envelope = |result: Value| {
        json!({
            "command": report.command,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": seed,
            "params": Value::Object(report.params.clone()),
            "result": result,
        })
    };
    if report.rows.is_empty() {
        vec![envelope(Value::Null)]
    } else {
        report.rows.iter().cloned().map(envelope).collect()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Renders a report; identical reports and seeds give identical bytes.
pub fn render(report: &Report, format: Format, seed: u64) -> Result<String, Box<dyn std::error::Error>> {
    let objs = lines(report, seed);
    match format {
        Format::Json => Ok(objs.iter().map(|o| format!("{o}\n")).collect()),
        Format::Csv => {
            let flat: Vec<Vec<(String, String)>> = objs
                .iter()
                .map(|o| {
                    let mut cells = Vec::new();
                    // Keep the provenance columns first.
                    for key in ["command", "version", "seed", "params", "result"] {
                        flatten(key, &o[key], &mut cells);
                    }
                    cells
                })
                .collect();
            let mut header: Vec<String> = Vec::new();
            for row in &flat {
                for (k, _) in row {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)?;
            for row in &flat {
                let record: Vec<&str> = header
                    .iter()
                    .map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| v.as_str()).unwrap_or(""))
                    .collect();
                w.write_record(&record)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}
