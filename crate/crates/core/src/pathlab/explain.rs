use alloc::format;
use alloc::vec::Vec;

use super::dataset::PathDataset;
use super::graph::{PathSolution, RoadGraph};
use super::shortest::{label_correcting_path, shortest_path};
use crate::dataset::ColumnValues;
use crate::error::{Error, Result};
use crate::selection::FeatureSelection;

/// Neighbor weights in the explainability score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Weighting {
    Uniform,
    /// `1 / (1 + d)` with `d` the instance distance to the neighbor.
    #[default]
    ExpWeighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplainedPath {
    /// Cost evaluated under the new instance's weights.
    pub path: PathSolution,
    /// `sum_i w_i * Hamming(path, path_i)` over the neighbors.
    pub score: f64,
    /// Historic points used, nearest first.
    pub neighbors: Vec<usize>,
    pub neighbor_weights: Vec<f64>,
}

/// Path closest (weighted Hamming) to the optimal paths of the `k` historic
/// points nearest to a new instance with feature row `features` under
/// `selection` (distance ties to the smaller index).
///
/// With `x` the candidate's edge indicator, `sum_i w_i |x - x^i|_1 =
/// sum_e x_e c_e + sum_i w_i |x^i|_1` with `c_e = sum_i w_i (1 - 2 x^i_e)`,
/// so the best path is a shortest path under the possibly negative costs
/// `c`, found by label correction.
#[allow(clippy::too_many_arguments)]
pub fn most_explainable_path(
    graph: &RoadGraph,
    data: &PathDataset,
    selection: &FeatureSelection,
    features: &[f64],
    weights: &[f64],
    k: usize,
    weighting: Weighting,
) -> Result<ExplainedPath> {
    let ds = &data.dataset;
    ds.check_selection(selection)?;
    let n = ds.n_points();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if features.len() != ds.n_features() {
        return Err(Error::InvalidParameter(format!(
            "feature row has {} values, dataset has {} features",
            features.len(),
            ds.n_features()
        )));
    }
    let mut dist: Vec<(f64, usize)> = (0..n).map(|i| (0.0, i)).collect();
    for f in selection.iter() {
        let ColumnValues::Numeric(values) = ds.features()[f].values() else {
            return Err(Error::InvalidDataset(format!(
                "feature '{}' is categorical; path features must be numeric",
                ds.features()[f].name()
            )));
        };
        for (d, v) in dist.iter_mut().zip(values) {
            d.0 += (features[f] - v).abs();
        }
    }
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    dist.truncate(k);
    let neighbor_weights: Vec<f64> = dist
        .iter()
        .map(|&(d, _)| match weighting {
            Weighting::Uniform => 1.0,
            Weighting::ExpWeighted => 1.0 / (1.0 + d),
        })
        .collect();
    let neighbors: Vec<usize> = dist.iter().map(|&(_, i)| i).collect();

    let mut costs = alloc::vec![0.0; graph.n_edges()];
    let mut constant = 0.0;
    for (&i, &w) in neighbors.iter().zip(&neighbor_weights) {
        let path = &data.paths[i];
        for (c, &used) in costs.iter_mut().zip(&path.indicator) {
            *c += if used { -w } else { w };
        }
        constant += w * path.edges.len() as f64;
    }
    let (edges, transformed) = label_correcting_path(graph, &costs)?;
    let path = PathSolution::from_edges(graph, edges, weights)?;
    Ok(ExplainedPath {
        path,
        score: transformed + constant,
        neighbors,
        neighbor_weights,
    })
}

/// Cost of `path` over the shortest-path cost, both under `weights`.
/// Rounding noise below 1 (equal-cost paths summed differently) is clamped.
pub fn relative_length(path: &PathSolution, graph: &RoadGraph, weights: &[f64]) -> Result<f64> {
    let best = shortest_path(graph, weights)?;
    if best.cost <= 0.0 {
        return Err(Error::InvalidParameter("shortest path has zero cost".into()));
    }
    Ok((path.cost_under(weights) / best.cost).max(1.0))
}
