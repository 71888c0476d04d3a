//! Output assembly: the reproducibility header, the optional summary, and the
//! table itself, written to stdout or `--out`.
//!
//! Everything except the `generated` timestamp is byte-stable, so repeated
//! runs can be diffed after dropping that one line.

use std::io::Write;

use chrono::{SecondsFormat, Utc};
use resonant_search::{emit_to_string, Emit, GroverRun, TableFormat};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

/// One finished command: which command ran, its extra parameters, and the
/// table to emit. `note` and `summary` are optional header material.
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Value)>,
    pub note: Option<String>,
    pub summary: Option<Value>,
    pub table: Box<dyn Emit>,
}

impl Report {
    pub fn new(command: &'static str, table: impl Emit + 'static) -> Self {
        Report { command, params: Vec::new(), note: None, summary: None, table: Box::new(table) }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.params.push((key, value.into()));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn summary(mut self, summary: Value) -> Self {
        self.summary = Some(summary);
        self
    }
}

/// The effective configuration as one JSON object: the shared fields, the
/// command name, and the command's own parameters. Keys come out sorted, so
/// the line is byte-stable.
fn config_echo(cfg: &RunConfig, report: &Report) -> Value {
    let mut map = match serde_json::to_value(cfg).expect("config serializes") {
        Value::Object(map) => map,
        _ => Map::new(),
    };
    map.insert("command".into(), Value::from(report.command));
    for (key, value) in &report.params {
        map.insert((*key).into(), value.clone());
    }
    Value::Object(map)
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Renders the full output. CSV puts the header into `#` comment lines; JSON
/// carries the same fields in the document. The timestamp sits on its own
/// line (CSV) or its own key (JSON) so comparisons can drop it.
pub fn render(cfg: &RunConfig, report: &Report) -> String {
    let version = env!("CARGO_PKG_VERSION");
    let echo = config_echo(cfg, report);
    match cfg.format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# resonant-search {version}\n"));
            out.push_str(&format!("# config {echo}\n"));
            out.push_str(&format!("# generated {}\n", timestamp()));
            if let Some(note) = &report.note {
                out.push_str(&format!("# note {note}\n"));
            }
            if let Some(summary) = &report.summary {
                out.push_str(&format!("# summary {summary}\n"));
            }
            out.push_str(&emit_to_string(report.table.as_ref(), TableFormat::Csv));
            out
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("version".into(), Value::from(version));
            doc.insert("config".into(), echo);
            doc.insert("generated".into(), Value::from(timestamp()));
            if let Some(note) = &report.note {
                doc.insert("note".into(), Value::from(note.clone()));
            }
            if let Some(summary) = &report.summary {
                doc.insert("summary".into(), summary.clone());
            }
            doc.insert("result".into(), report.table.json_value());
            let mut text = serde_json::to_string_pretty(&Value::Object(doc))
                .expect("documents serialize");
            text.push('\n');
            text
        }
    }
}

/// Writes the rendered output to `--out` when set, stdout otherwise.
pub fn deliver(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let text = render(cfg, report);
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::config(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match lock.write_all(text.as_bytes()).and_then(|()| lock.flush()) {
                // a consumer that stops reading (head, less) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|e| CliError::config(format!("cannot write stdout: {e}"))),
            }
        }
    }
}

/// Single-row table for the discrete-iteration baseline.
pub struct GroverTable(pub GroverRun);

impl Emit for GroverTable {
    fn write_csv(&self, w: &mut dyn std::io::Write) -> std::io::Result<()> {
        writeln!(w, "n,target,iterations,success")?;
        writeln!(
            w,
            "{},{},{},{:.16e}",
            self.0.n, self.0.target, self.0.iterations, self.0.success
        )
    }

    fn json_value(&self) -> Value {
        json!({
            "kind": "grover",
            "n": self.0.n,
            "target": self.0.target,
            "iterations": self.0.iterations,
            "success": self.0.success,
        })
    }
}
