//! File formats.
//!
//! - dataset JSON: `{"features": [{"name", "kind"?, "values"}], "solution_distance": [[..]]}`
//!   or `"solution_features": [[..]]` instead of the distance matrix
//!   (pairwise 1-norm). `kind` is `numeric` or `categorical`; when omitted
//!   it is inferred (all numbers: numeric, all strings: categorical).
//! - Maximum Coverage JSON: `{"universe_size", "subsets": [[..]], "K", "W"}`,
//!   elements numbered from 0.
//! - graph JSON `{"nodes": [{"id","x","y"}], "edges": [{"id","tail","head"}], "source", "target"}`
//!   (tail/head/source/target are node ids), or `nodes.csv` (`id,x,y`) plus
//!   `edges.csv` (`id,tail,head`).
//! - scenario CSV: header of edge ids, one row of positive weights per
//!   scenario.
//! - models: CPLEX LP text; solutions: `name value` lines.

mod dataset;
mod graph;

pub use dataset::{dataset_to_json, parse_dataset, read_dataset, write_dataset, DatasetFile, FeatureFile};
pub use graph::{
    load_directory, read_graph_csv, read_graph_json, read_scenarios_csv, write_graph_json, write_scenarios_csv,
    GraphFile,
};

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use fspeo_core::hardness::MaxCoverageInstance;
use fspeo_core::mip::{parse_solution, to_lp_string, MipModel, SolutionValues};
use sha2::{Digest, Sha256};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_max_coverage(path: &Path) -> Result<MaxCoverageInstance> {
    let mut mc: MaxCoverageInstance =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("{} is not a coverage instance", path.display()))?;
    mc.normalize();
    mc.validate()?;
    Ok(mc)
}

pub fn write_exchange_file(model: &MipModel, path: &Path) -> Result<()> {
    write_text(path, &to_lp_string(model))
}

pub fn read_solution(path: &Path) -> Result<SolutionValues> {
    Ok(parse_solution(&read_text(path)?)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}
