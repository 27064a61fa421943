//! CSV and JSON emission with a hashed parameter header.

use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::sweep::Table;

pub const TOOL: &str = concat!("qhe ", env!("CARGO_PKG_VERSION"));

/// A table plus the configurations that produced it.
#[derive(Debug, Clone)]
pub struct Document {
    /// Recipe panel name, when produced by `figures`.
    pub panel: Option<String>,
    /// `(label, config)`; labels name the engines of comparison panels.
    pub configs: Vec<(String, SweepConfig)>,
    pub table: Table,
}

impl Document {
    pub fn single(config: SweepConfig, table: Table) -> Self {
        Self {
            panel: None,
            configs: vec![("sweep".into(), config)],
            table,
        }
    }

    /// `sha256:` of the labelled canonical configs.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        for (label, c) in &self.configs {
            h.update(format!("[{label}]\n{}", c.canonical()).as_bytes());
        }
        format!("sha256:{}", hex::encode(h.finalize()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# tool = {TOOL}\n");
        if let Some(panel) = &self.panel {
            out += &format!("# panel = {panel}\n");
        }
        out += &format!("# config_hash = {}\n", self.config_hash());
        for (label, c) in &self.configs {
            out += &format!("# [{label}]\n");
            for line in c.canonical().lines() {
                out += &format!("# {line}\n");
            }
        }
        out += &self.table.columns.join(",");
        out.push('\n');
        for row in &self.table.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| v.map(format_sig).unwrap_or_default())
                .collect();
            out += &fields.join(",");
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut configs = Map::new();
        for (label, c) in &self.configs {
            configs.insert(
                label.clone(),
                serde_json::to_value(c).expect("config serializes"),
            );
        }
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (name, v) in self.table.columns.iter().zip(r) {
                    m.insert(name.clone(), v.map_or(Value::Null, |x| json!(x)));
                }
                Value::Object(m)
            })
            .collect();
        let doc = json!({
            "tool": TOOL,
            "panel": self.panel,
            "config_hash": self.config_hash(),
            "configs": configs,
            "columns": self.table.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Decimal with 12 significant digits, trailing zeros trimmed; scientific
/// notation outside `1e-5 ..= 1e12`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
