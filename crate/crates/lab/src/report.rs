//! Report envelope and output destinations.
//!
//! A report is `{header, body}`. Only the header carries wall-clock data, so
//! two runs of one config produce byte-identical bodies.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Default output directory when `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "FRACPOW_OUTPUT_DIR";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Header {
    pub artifact: String,
    pub version: String,
    pub timestamp_unix: u64,
    pub duration_seconds: f64,
}

impl Header {
    pub fn now(duration: Duration) -> Self {
        Self {
            artifact: "fracpow".into(),
            version: VERSION.into(),
            timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            duration_seconds: duration.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Body<C, R> {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: C,
    pub results: R,
    /// Invariants that failed; a nonempty list means exit status 2.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ReportDoc<C, R> {
    pub header: Header,
    pub body: Body<C, R>,
}

/// A flat table for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Where a report goes: `--output`, else `$FRACPOW_OUTPUT_DIR/<command>.<ext>`, else stdout.
pub fn destination(output: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = output {
        return Some(p.to_path_buf());
    }
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(format!("{command}.{}", format.extension())))
}

pub fn render_json<C: Serialize, R: Serialize>(doc: &ReportDoc<C, R>) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

/// One `#` header line, then `#` lines for the body metadata, then the table.
pub fn render_csv<C: Serialize, R>(doc: &ReportDoc<C, R>, table: &Table) -> anyhow::Result<String> {
    let h = &doc.header;
    let mut out = format!(
        "# {} version={} timestamp_unix={} duration_seconds={}\n",
        h.artifact, h.version, h.timestamp_unix, h.duration_seconds
    );
    let b = &doc.body;
    out += &format!("# command={} version={} seed={}\n", b.command, b.version, b.seed);
    out += &format!("# config={}\n", serde_json::to_string(&b.config)?);
    out += &format!("# violations={}\n", serde_json::to_string(&b.violations)?);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    out += &String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?;
    Ok(out)
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomically(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let tmp = path.with_extension("partial");
    fs::write(&tmp, text).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move report into {}", path.display()))?;
    Ok(())
}

pub fn emit(dest: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match dest {
        Some(p) => write_atomically(p, text),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes()).context("cannot write to stdout")?;
            Ok(())
        }
    }
}

/// The part of a rendered report that must be reproducible.
pub fn body_of(text: &str) -> anyhow::Result<String> {
    if text.starts_with('#') {
        return Ok(text.split_once('\n').map_or("", |(_, rest)| rest).to_string());
    }
    let v: serde_json::Value = serde_json::from_str(text)?;
    Ok(serde_json::to_string(v.get("body").context("report has no body")?)?)
}
