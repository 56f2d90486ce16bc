//! Content-addressed report store: file name = input digest, version-salted
//! so upgrades invalidate stale entries, written atomically.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Digest of (command, canonical input, parameters, tool version).
pub fn input_digest(command: &str, canonical_input: &str, params: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update([0]);
    hasher.update(canonical_input.as_bytes());
    hasher.update([0]);
    hasher.update(params.as_bytes());
    hasher.update([0]);
    hasher.update(VERSION.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Cache directory resolution: explicit --out, then COXL2_CACHE, then a
/// local default.
pub fn cache_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(dir) = explicit {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var("COXL2_CACHE") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("coxl2-cache")
}

pub fn report_path(dir: &Path, digest: &str) -> PathBuf {
    dir.join(format!("{digest}.json"))
}

/// Reads a cached report if present.
pub fn lookup(dir: &Path, digest: &str) -> Option<serde_json::Value> {
    let bytes = std::fs::read(report_path(dir, digest)).ok()?;
    serde_json::from_slice(&bytes).ok()
}

/// Writes a report via a temporary file and an atomic rename, so concurrent
/// scans never emit torn files.
pub fn store(dir: &Path, digest: &str, report: &serde_json::Value) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::domain(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = dir.join(format!(".tmp-{digest}-{}", std::process::id()));
    let body = serde_json::to_string_pretty(report).expect("reports serialize");
    std::fs::write(&tmp, body)
        .map_err(|e| CliError::domain(format!("cannot write {}: {e}", tmp.display())))?;
    let dest = report_path(dir, digest);
    std::fs::rename(&tmp, &dest)
        .map_err(|e| CliError::domain(format!("cannot rename into {}: {e}", dest.display())))?;
    Ok(())
}
