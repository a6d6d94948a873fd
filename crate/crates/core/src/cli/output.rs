use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::ExperimentConfig;
use crate::rng::RNG_ID;
use crate::{Error, Result, CODE_VERSION};

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| io(path, e))
}

/// Comment lines opening every CSV file.
pub fn csv_preamble(cfg: &ExperimentConfig) -> String {
    format!(
        "# codecrit {CODE_VERSION} rng={RNG_ID}\n# config={}\n",
        cfg.to_compact_json()
    )
}

pub fn write_csv(path: &Path, cfg: &ExperimentConfig, body: &str) -> Result<()> {
    write_text(path, &(csv_preamble(cfg) + body))
}

/// Writes `{version, rng, config, <fields of value>}`.
pub fn write_json<T: Serialize>(path: &Path, cfg: &ExperimentConfig, value: &T) -> Result<()> {
    let mut doc = json!({
        "version": CODE_VERSION,
        "rng": RNG_ID,
        "config": cfg,
    });
    match serde_json::to_value(value)? {
        Value::Object(map) => doc.as_object_mut().expect("object").extend(map),
        other => {
            doc["result"] = other;
        }
    }
    write_text(path, &(serde_json::to_string_pretty(&doc)? + "\n"))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    fs::write(path, text).map_err(|e| io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io(path, e))
}

/// Quotes a CSV field when it contains a separator, quote or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
