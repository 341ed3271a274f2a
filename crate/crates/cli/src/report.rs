//! Report serialization: JSON arrays or CSV with a fixed column order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cycle_integrals::verify::ReportRow;
use serde::Serialize;

pub const COLUMNS: [&str; 12] = [
    "identity",
    "family",
    "form",
    "D",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_residual",
    "rel_residual",
    "tol",
    "pass",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

pub fn render(rows: &[ReportRow], format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(COLUMNS).map_err(|e| e.to_string())?;
            for r in rows {
                w.serialize(r).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<(), String> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// `report.json` -> `report.json.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    s.push('\n');
    write(path, s.as_bytes())
}
