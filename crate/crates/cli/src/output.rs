//! Deterministic file writers and the run manifest.
//!
//! Every primary output opens with a `run_id` marker tying it to its
//! manifest; rows use a fixed scientific float format so reruns are
//! byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Fixed-format float for CSV cells (17 significant digits round-trips f64).
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn run_id(scenario_bytes: &[u8], seed: u64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(scenario_bytes);
    hasher.update(seed.to_le_bytes());
    let digest = hasher.finalize();
    hex_lower(&digest[..8])
}

pub fn input_sha256(scenario_bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(scenario_bytes);
    hex_lower(&hasher.finalize())
}

fn hex_lower(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub struct CsvWriter {
    file: fs::File,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path, run_id: &str, header: &[&str]) -> Result<Self, CliError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let mut file = fs::File::create(path)?;
        writeln!(file, "# run_id={run_id}")?;
        writeln!(file, "{}", header.join(","))?;
        Ok(Self {
            file,
            path: path.to_path_buf(),
        })
    }

    pub fn row(&mut self, cells: &[f64]) -> Result<(), CliError> {
        let line: Vec<String> = cells.iter().map(|c| fmt_f64(*c)).collect();
        writeln!(self.file, "{}", line.join(","))?;
        Ok(())
    }

    pub fn finish(self) -> PathBuf {
        self.path
    }
}

pub struct JsonLinesWriter {
    file: fs::File,
    path: PathBuf,
}

impl JsonLinesWriter {
    pub fn create(path: &Path, run_id: &str) -> Result<Self, CliError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let mut file = fs::File::create(path)?;
        writeln!(file, "{}", serde_json::json!({ "run_id": run_id }))?;
        Ok(Self {
            file,
            path: path.to_path_buf(),
        })
    }

    pub fn record<T: serde::Serialize>(&mut self, record: &T) -> Result<(), CliError> {
        let line = serde_json::to_string(record).map_err(|e| CliError::io(e.to_string()))?;
        writeln!(self.file, "{line}")?;
        Ok(())
    }

    pub fn finish(self) -> PathBuf {
        self.path
    }
}

/// Writes a standalone JSON result file carrying the run marker.
pub fn write_json(
    path: &Path,
    run_id: &str,
    body: &serde_json::Value,
) -> Result<PathBuf, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut wrapped = serde_json::Map::new();
    wrapped.insert("run_id".into(), serde_json::Value::String(run_id.into()));
    if let serde_json::Value::Object(map) = body {
        for (k, v) in map {
            wrapped.insert(k.clone(), v.clone());
        }
    } else {
        wrapped.insert("value".into(), body.clone());
    }
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(wrapped))
        .map_err(|e| CliError::io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(path.to_path_buf())
}

#[derive(serde::Serialize)]
pub struct Manifest<'a> {
    pub run_id: &'a str,
    pub tool: ToolInfo,
    pub scenario_path: String,
    pub input_sha256: String,
    pub seed: u64,
    pub kind: &'a str,
    pub outputs: Vec<String>,
    pub wall_time_ms: u128,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub summary: serde_json::Value,
}

#[derive(serde::Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: "dotmem",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

pub fn manifest_path_for(primary_output: &Path) -> PathBuf {
    let stem = primary_output
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "run".to_string());
    primary_output.with_file_name(format!("{stem}.manifest.json"))
}

pub fn write_manifest(path: &Path, manifest: &Manifest<'_>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest).map_err(|e| CliError::io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}
