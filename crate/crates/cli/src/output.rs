//! CSV and JSON rendering. Every file carries the tool version, the resolved
//! configuration and its SHA-256, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const VERSION: &str = concat!("unruh ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Columns {
    pub names: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

pub struct Report {
    pub command: &'static str,
    pub config: Value,
    /// JSON object of scalar results.
    pub summary: Map<String, Value>,
    pub columns: Option<Columns>,
}

pub fn checksum(config: &Value) -> String {
    let digest = Sha256::digest(config.to_string().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Full precision scientific notation (17 significant digits).
fn number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {VERSION}");
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# config: {}", self.config);
        let _ = writeln!(s, "# config_sha256: {}", checksum(&self.config));
        for (k, v) in &self.summary {
            let _ = writeln!(s, "# {k}: {v}");
        }
        if let Some(c) = &self.columns {
            let _ = writeln!(s, "{}", c.names.join(","));
            for row in &c.rows {
                let _ = writeln!(s, "{}", row.iter().map(|&x| number(x)).collect::<Vec<_>>().join(","));
            }
        }
        s
    }

    fn json(&self) -> String {
        let mut m = Map::new();
        m.insert("version".into(), VERSION.into());
        m.insert("command".into(), self.command.into());
        m.insert("config".into(), self.config.clone());
        m.insert("config_sha256".into(), checksum(&self.config).into());
        for (k, v) in &self.summary {
            m.insert(k.clone(), v.clone());
        }
        if let Some(c) = &self.columns {
            m.insert("columns".into(), c.names.clone().into());
            m.insert("rows".into(), serde_json::to_value(&c.rows).unwrap_or(Value::Null));
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(m)).unwrap_or_default();
        out.push('\n');
        out
    }
}

/// Where output goes: `None` is stdout. A relative `--output`, or the
/// default file name when no `--output` is given, is placed under
/// `output_dir` if set.
pub fn destination(output: Option<&Path>, output_dir: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    match (output, output_dir) {
        (Some(p), _) if p == Path::new("-") => None,
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(format!("{command}.{}", format.extension()))),
        (None, None) => None,
    }
}

pub fn write_to(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
