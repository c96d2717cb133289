use alloc::vec::Vec;

use super::graph::{PathSolution, RoadGraph, ScenarioSet};
use super::grid::FeatureTable;
use super::shortest::shortest_path;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Historic data of the path lab: one point per sampled scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDataset {
    pub dataset: Dataset,
    /// Optimal path of each point.
    pub paths: Vec<PathSolution>,
    /// Scenario index of each point.
    pub scenario_ids: Vec<usize>,
}

/// Number of edges used by exactly one of the two paths.
pub fn hamming(a: &PathSolution, b: &PathSolution) -> usize {
    a.indicator.iter().zip(&b.indicator).filter(|(x, y)| x != y).count()
}

/// Instance features from `table`, solution distances = Hamming distances
/// between the optimal paths.
pub fn build_path_dataset(
    graph: &RoadGraph,
    scenarios: &ScenarioSet,
    ids: &[usize],
    table: &FeatureTable,
) -> Result<PathDataset> {
    if let Some(&s) = ids.iter().find(|&&s| s >= scenarios.len()) {
        return Err(Error::IndexOutOfRange {
            index: s,
            len: scenarios.len(),
        });
    }
    let paths: Vec<PathSolution> = ids
        .iter()
        .map(|&s| shortest_path(graph, scenarios.scenario(s)))
        .collect::<Result<_>>()?;
    let dx: Vec<Vec<f64>> = paths
        .iter()
        .map(|a| paths.iter().map(|b| hamming(a, b) as f64).collect())
        .collect();
    let dataset = Dataset::new(table.columns(scenarios, ids), dx)?;
    Ok(PathDataset {
        dataset,
        paths,
        scenario_ids: ids.to_vec(),
    })
}
