use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

/// Provenance record written next to every result file. It is the only
/// output carrying wall-clock timings, so result files stay byte-identical
/// across repeated runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: Value,
    pub seeds: Vec<u64>,
    /// File name to SHA-256 of every input.
    pub input_hashes: BTreeMap<String, String>,
    /// Outputs written by the run, by file name.
    pub outputs: Vec<String>,
    /// Seconds per phase.
    pub timings: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(command: &str, config: Value, seeds: Vec<u64>) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            seeds,
            input_hashes: BTreeMap::new(),
            outputs: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let hash = crate::io::sha256_file(path)?;
        self.input_hashes.insert(path.display().to_string(), hash);
        Ok(())
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(file_name(path));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::io::write_json(path, self)
    }
}

pub fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// `<dir>/<stem>.manifest.json` for a result at `<dir>/<stem>.<ext>`.
pub fn manifest_path(result: &Path) -> PathBuf {
    sibling(result, "manifest.json")
}

/// `<dir>/<stem>.<suffix>`.
pub fn sibling(result: &Path, suffix: &str) -> PathBuf {
    let stem = result.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    result.with_file_name(format!("{stem}.{suffix}"))
}
