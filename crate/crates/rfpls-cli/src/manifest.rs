//! Run manifests: what was executed, with which configuration and seeds,
//! and which files came out of it.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub version: &'static str,
    pub started_unix: u64,
    pub duration_ms: u64,
    pub outputs: Vec<PathBuf>,
}

pub struct ManifestBuilder {
    command: Vec<String>,
    config: serde_json::Value,
    seeds: Vec<u64>,
    started: Instant,
    started_unix: u64,
    outputs: Vec<PathBuf>,
}

impl ManifestBuilder {
    pub fn new(command: Vec<String>, config: serde_json::Value, seeds: Vec<u64>) -> Self {
        Self {
            command,
            config,
            seeds,
            started: Instant::now(),
            started_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: Vec::new(),
        }
    }

    /// Record an output file; call after the file has been written.
    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Write the manifest itself, verifying every recorded output exists.
    pub fn write(self, path: &Path) -> anyhow::Result<()> {
        for out in &self.outputs {
            anyhow::ensure!(out.exists(), "recorded output {} is missing", out.display());
        }
        let manifest = RunManifest {
            command: self.command,
            config: self.config,
            seeds: self.seeds,
            version: env!("CARGO_PKG_VERSION"),
            started_unix: self.started_unix,
            duration_ms: self.started.elapsed().as_millis() as u64,
            outputs: self.outputs,
        };
        std::fs::write(path, serde_json::to_string_pretty(&manifest)?)?;
        Ok(())
    }
}
