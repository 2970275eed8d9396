use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use fillvol::{Error, VERSION};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    /// Explicit flag first, then the extension of `--out`, then text.
    pub fn resolve(flag: Option<Format>, out: Option<&Path>) -> Format {
        flag.or_else(|| match out?.extension()?.to_str()? {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        })
        .unwrap_or(Format::Text)
    }
}

/// Everything that determines a run's output. Serialized into every JSON and CSV output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub args: Value,
    pub format: Format,
    pub node_limit: usize,
}

/// A command result in all three renderings. `csv` falls back to `field,value` pairs of
/// the top-level JSON scalars when a command has no natural table.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
}

impl Report {
    pub fn new(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            csv: None,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Json => pretty(&json!({
                "version": VERSION,
                "config": cfg,
                "result": self.json,
            })),
            Format::Text => ensure_newline(self.text.clone()),
            Format::Csv => {
                let body = self.csv.clone().unwrap_or_else(|| scalar_csv(&self.json));
                format!("# fillvol {VERSION} {}\n{body}", compact(cfg))
            }
        }
    }
}

pub fn render_error(e: &Error, cfg: &RunConfig) -> String {
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::BudgetExceeded(b) = e {
        err["nodes"] = json!(b.nodes);
        err["lower"] = json!(fillvol::rational::format_rat(&b.lower));
        err["upper"] = json!(b.upper.as_ref().map(fillvol::rational::format_rat));
    }
    match cfg.format {
        Format::Json => pretty(&json!({ "version": VERSION, "config": cfg, "error": err })),
        Format::Csv => format!("# fillvol {VERSION} {}\nerror,message\n{},{:?}\n", compact(cfg), e.kind(), e.to_string()),
        Format::Text => format!("error: {}: {e}\n", e.kind()),
    }
}

fn pretty(v: &Value) -> String {
    ensure_newline(serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("config serializes")
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn scalar_csv(v: &Value) -> String {
    let mut out = String::from("field,value\n");
    if let Value::Object(map) = v {
        for (k, v) in map {
            let cell = match v {
                Value::String(s) => s.clone(),
                Value::Number(_) | Value::Bool(_) => v.to_string(),
                _ => continue,
            };
            writeln!(out, "{k},{cell}").expect("writing to a string");
        }
    }
    out
}
