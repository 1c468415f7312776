use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Inconsistent(_) => 2,
            CliError::Usage(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// The inputs that determine a run. Hashing it identifies the run in the
/// report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<(String, String)>,
    pub format: String,
}

impl RunConfig {
    pub fn new(command: &str, format: &str) -> Self {
        Self {
            command: command.to_string(),
            kind: None,
            input: None,
            seed: None,
            delta: None,
            trials: None,
            extra: Vec::new(),
            format: format.to_string(),
        }
    }

    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub schema: u32,
    pub command: &'a str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub config_hash: String,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<f64>,
}

pub fn render_report(cfg: &RunConfig, results: Value, duration_ms: Option<f64>) -> String {
    let r = Report {
        schema: SCHEMA,
        command: &cfg.command,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        config_hash: cfg.hash(),
        results,
        duration_ms,
    };
    let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
    s.push('\n');
    s
}

/// Where output goes: an explicit path, else `$FREEWILL_OUT_DIR/<default_name>`,
/// else standard output.
pub fn destination(out: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_path_buf());
    }
    std::env::var_os("FREEWILL_OUT_DIR")
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(default_name))
}

pub fn emit(out: Option<&Path>, default_name: &str, body: &str) -> Result<(), CliError> {
    match destination(out, default_name) {
        Some(path) => fs::write(&path, body).map_err(|e| CliError::io(&path, e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_sensitive() {
        let mut a = RunConfig::new("bounds", "json");
        a.delta = Some("1deg".into());
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.delta = Some("1arcmin".into());
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn report_has_schema_and_optional_duration() {
        let cfg = RunConfig::new("peres", "json");
        let plain = render_report(&cfg, serde_json::json!({"x": 1}), None);
        assert!(plain.contains("\"schema\": 1"));
        assert!(!plain.contains("duration_ms"));
        let timed = render_report(&cfg, serde_json::json!({}), Some(1.5));
        assert!(timed.contains("duration_ms"));
    }
}
