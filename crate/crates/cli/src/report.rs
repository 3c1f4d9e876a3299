//! Report envelope and output plumbing.

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "1";

/// Everything needed to assemble and deliver one report.
pub struct Emitter {
    pub command: &'static str,
    pub seed: u64,
    pub format: Format,
    pub output: Option<String>,
    pub no_timestamp: bool,
}

impl Emitter {
    /// Wraps a result into the envelope and writes it out. `csv` carries the
    /// tabular rendition for commands that have one.
    pub fn emit(
        &self,
        config: Value,
        status: &str,
        result: Value,
        text: String,
        csv: Option<String>,
    ) -> Result<(), String> {
        let body = match self.format {
            Format::Json => {
                let mut envelope = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "seed": self.seed,
                    "status": status,
                    "config": config,
                    "result": result,
                });
                if !self.no_timestamp {
                    let now = std::time::SystemTime::now()
                        .duration_since(std::time::UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    envelope["unix_time"] = json!(now);
                }
                let mut s = serde_json::to_string_pretty(&envelope)
                    .map_err(|e| format!("serialization failed: {e}"))?;
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!("{} [{}]\n", self.command, status);
                s.push_str(&text);
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Csv => csv.ok_or_else(|| {
                format!("--out csv is not supported by the {} command", self.command)
            })?,
        };
        match &self.output {
            Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {path}: {e}")),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

pub fn to_config<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

/// CSV block from a header and rows of floats; shortest-roundtrip formatting.
pub fn csv_block(header: &str, rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
