use std::path::PathBuf;

use fspeo_core::pathlab::{GridSpec, Weighting};
use fspeo_core::solvers::KOptConfig;
use serde::{Deserialize, Serialize};

/// Jittered lattice road network with regional congestion; see
/// [`super::generate_road_network`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticNetwork {
    pub rows: usize,
    pub cols: usize,
    pub scenarios: usize,
    /// Adds the reverse of every edge. The transformed costs of the
    /// explainable-path search may then contain negative cycles.
    pub bidirectional: bool,
    /// Maximum coordinate displacement of a node, in lattice units.
    pub jitter: f64,
    /// Congestion zones (rows x cols) sharing one factor per scenario.
    pub zone_rows: usize,
    pub zone_cols: usize,
    /// Log-scale spread of the zone factors.
    pub zone_sigma: f64,
    /// Log-scale spread of the per-edge, per-scenario noise.
    pub edge_sigma: f64,
    /// Log-scale spread of the fixed per-edge base cost.
    pub base_sigma: f64,
}

impl Default for SyntheticNetwork {
    fn default() -> Self {
        Self {
            rows: 6,
            cols: 10,
            scenarios: 500,
            bidirectional: false,
            jitter: 0.25,
            zone_rows: 2,
            zone_cols: 3,
            zone_sigma: 0.5,
            edge_sigma: 0.2,
            base_sigma: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Synthetic(SyntheticNetwork),
    /// `nodes.csv`, `edges.csv`, `scenarios.csv` in `path`.
    Directory {
        path: PathBuf,
        source: u64,
        target: u64,
        #[serde(default)]
        invert_weights: bool,
    },
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic(SyntheticNetwork::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_train: usize,
    /// Held-out scenarios, disjoint from the training sample.
    pub n_eval: usize,
    pub k: usize,
    pub l_values: Vec<usize>,
    pub grid: GridSpec,
    pub include_edge_features: bool,
    pub repeats: usize,
    pub random_baseline_repeats: usize,
    pub seed: u64,
    pub weighting: Weighting,
    /// Search settings; `max_features` and `seed` are set per run.
    pub kopt: KOptConfig,
    pub data: DataSource,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_train: 200,
            n_eval: 50,
            k: 5,
            l_values: (1..=10).collect(),
            grid: GridSpec::new(4, 5),
            include_edge_features: false,
            repeats: 10,
            random_baseline_repeats: 100,
            seed: 0,
            weighting: Weighting::ExpWeighted,
            kopt: KOptConfig::default(),
            data: DataSource::default(),
        }
    }
}
