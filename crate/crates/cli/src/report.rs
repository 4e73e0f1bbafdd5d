//! Run reports and output formatting.
//!
//! JSON commands wrap their payload in a schema-stable report carrying the
//! seed, the echoed configuration, and diagnostics. CSV commands emit
//! `#`-prefixed metadata lines followed by plain comma-separated rows
//! ('.' decimal,17 significant digits). Under `--deterministic` the
//! timestamp and wall-time fields are suppressed, making repeated runs
//! byte-identical.

use serde::Serialize;
use serde_json::Value;

pub const ARTIFACT: &str = concat!("relqi ", env!("CARGO_PKG_VERSION"));

/// 17 significant digits, locale-independent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug)]
pub enum Payload {
    Json(Value),
    Csv(Csv),
    Text(String),
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub artifact: &'static str,
    pub command: String,
    pub seed: u64,
    pub quadrature_nodes: usize,
    pub deterministic: bool,
    pub config: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub diagnostics: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

/// CSV payload: named columns plus preformatted rows.
#[derive(Debug)]
pub struct Csv {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Csv {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub quadrature_nodes: usize,
    pub deterministic: bool,
    pub config: Value,
    pub started: std::time::Instant,
    pub timestamp_ms: u128,
}

/// Render a payload to the final output bytes.
pub fn render(meta: &Meta, payload: Payload, diagnostics: Value) -> String {
    match payload {
        Payload::Json(results) => {
            let report = RunReport {
                artifact: ARTIFACT,
                command: meta.command.clone(),
                seed: meta.seed,
                quadrature_nodes: meta.quadrature_nodes,
                deterministic: meta.deterministic,
                config: meta.config.clone(),
                results,
                diagnostics,
                timestamp_ms: (!meta.deterministic).then_some(meta.timestamp_ms),
                wall_time_ms: (!meta.deterministic)
                    .then(|| meta.started.elapsed().as_secs_f64() * 1e3),
            };
            let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
            out.push('\n');
            out
        }
        Payload::Csv(csv) => {
            let mut out = String::new();
            out.push_str(&format!("# {ARTIFACT}\n"));
            out.push_str(&format!("# command: {}\n", meta.command));
            out.push_str(&format!("# seed: {}\n", meta.seed));
            out.push_str(&format!("# quadrature_nodes: {}\n", meta.quadrature_nodes));
            if !meta.deterministic {
                out.push_str(&format!("# timestamp_ms: {}\n", meta.timestamp_ms));
            }
            out.push_str(&csv.columns.join(","));
            out.push('\n');
            for row in &csv.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Payload::Text(t) => t,
    }
}
