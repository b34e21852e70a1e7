//! Deterministic CSV/JSON output files with the resolved run configuration
//! embedded, written atomically (temp file + rename).

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub const OUTPUT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A tabular result: fixed column names plus rows of equal length.
#[derive(Debug, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// Everything an output file embeds besides the data.
#[derive(Debug, Serialize)]
pub struct RunMeta {
    pub schema: u32,
    pub command: String,
    /// Fully resolved configuration (CLI arguments plus any network file
    /// after overrides).
    pub config: serde_json::Value,
}

#[derive(Debug, Serialize)]
struct JsonDocument<'a> {
    #[serde(flatten)]
    meta: &'a RunMeta,
    sign_convention: &'static str,
    columns: &'a [&'static str],
    rows: &'a [Vec<f64>],
}

const SIGN_CONVENTION: &str =
    "squeezing_db > 0 means below shot noise; v_* are variances relative to shot noise (vacuum = 1)";

pub fn write_table(path: &Path, format: Format, meta: &RunMeta, table: &Table) -> Result<()> {
    let body = match format {
        Format::Csv => render_csv(meta, table)?,
        Format::Json => {
            let doc = JsonDocument {
                meta,
                sign_convention: SIGN_CONVENTION,
                columns: &table.columns,
                rows: &table.rows,
            };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
    };
    write_atomic(path, body.as_bytes())
}

fn render_csv(meta: &RunMeta, table: &Table) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("# schema: {}\n", meta.schema));
    out.push_str(&format!("# command: {}\n", meta.command));
    out.push_str(&format!(
        "# config: {}\n",
        serde_json::to_string(&meta.config)?
    ));
    out.push_str(&format!("# sign convention: {SIGN_CONVENTION}\n"));
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&format!("{v:?}"));
            first = false;
        }
        out.push('\n');
    }
    Ok(out)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
