use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::graph::{RoadGraph, ScenarioSet};
use crate::dataset::FeatureColumn;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn of_nodes(graph: &RoadGraph) -> Self {
        graph.nodes().iter().fold(
            BoundingBox {
                min_x: f64::INFINITY,
                min_y: f64::INFINITY,
                max_x: f64::NEG_INFINITY,
                max_y: f64::NEG_INFINITY,
            },
            |b, v| BoundingBox {
                min_x: b.min_x.min(v.x),
                min_y: b.min_y.min(v.y),
                max_x: b.max_x.max(v.x),
                max_y: b.max_y.max(v.y),
            },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    /// Defaults to the bounding box of the node coordinates.
    #[cfg_attr(feature = "serde", serde(default))]
    pub bbox: Option<BoundingBox>,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, bbox: None }
    }

    /// Cell `(row, col)` of a point; row 0 is at `min_y`. A point on a cell
    /// boundary belongs to the lower-index cell; points outside the box are
    /// clamped to the border cells.
    pub fn cell_of(&self, bbox: &BoundingBox, x: f64, y: f64) -> (usize, usize) {
        fn index(v: f64, lo: f64, hi: f64, n: usize) -> usize {
            if hi <= lo {
                return 0;
            }
            let t = (v - lo) / (hi - lo);
            let c = libm::ceil(t * n as f64) - 1.0;
            if c <= 0.0 {
                0
            } else {
                (c as usize).min(n - 1)
            }
        }
        (
            index(y, bbox.min_y, bbox.max_y, self.rows),
            index(x, bbox.min_x, bbox.max_x, self.cols),
        )
    }
}

/// Where a feature column comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FeatureSource {
    /// Sum of the weights of the member edges (positions, ascending).
    Cell { row: usize, col: usize, edges: Vec<usize> },
    /// Weight of a single edge.
    Edge(usize),
}

/// Feature definitions over edge-weight vectors.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub sources: Vec<FeatureSource>,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    /// Feature values of one weight vector.
    pub fn row(&self, weights: &[f64]) -> Vec<f64> {
        self.sources
            .iter()
            .map(|s| match s {
                FeatureSource::Cell { edges, .. } => edges.iter().map(|&e| weights[e]).sum(),
                FeatureSource::Edge(e) => weights[*e],
            })
            .collect()
    }

    /// Numeric columns over the scenarios `ids`.
    pub fn columns(&self, scenarios: &ScenarioSet, ids: &[usize]) -> Vec<FeatureColumn> {
        let rows: Vec<Vec<f64>> = ids.iter().map(|&s| self.row(scenarios.scenario(s))).collect();
        self.names
            .iter()
            .enumerate()
            .map(|(f, name)| FeatureColumn::numeric(name.clone(), rows.iter().map(|r| r[f]).collect()))
            .collect()
    }

    /// Sub-table of the columns whose source is an edge.
    pub fn edge_columns(&self) -> FeatureTable {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&f| matches!(self.sources[f], FeatureSource::Edge(_)))
            .collect();
        FeatureTable {
            names: keep.iter().map(|&f| self.names[f].clone()).collect(),
            sources: keep.iter().map(|&f| self.sources[f].clone()).collect(),
        }
    }
}

/// One column per nonempty grid cell (sum of the weights of the edges whose
/// midpoint lies in the cell) and optionally one per edge; columns constant
/// over all scenarios are dropped. Cells are ordered row-major, edges by
/// position.
pub fn build_grid_features(
    graph: &RoadGraph,
    scenarios: &ScenarioSet,
    spec: &GridSpec,
    include_edge_features: bool,
) -> Result<FeatureTable> {
    if spec.rows == 0 || spec.cols == 0 {
        return Err(Error::InvalidParameter("grid needs at least one row and column".into()));
    }
    if scenarios.n_edges() != graph.n_edges() {
        return Err(Error::InvalidParameter(format!(
            "scenarios have {} edges, graph has {}",
            scenarios.n_edges(),
            graph.n_edges()
        )));
    }
    let bbox = spec.bbox.unwrap_or_else(|| BoundingBox::of_nodes(graph));
    let mut members = vec![Vec::new(); spec.rows * spec.cols];
    for e in 0..graph.n_edges() {
        let (x, y) = graph.midpoint(e);
        let (r, c) = spec.cell_of(&bbox, x, y);
        members[r * spec.cols + c].push(e);
    }
    let mut all = FeatureTable {
        names: Vec::new(),
        sources: Vec::new(),
    };
    for (cell, edges) in members.into_iter().enumerate() {
        if !edges.is_empty() {
            let (row, col) = (cell / spec.cols, cell % spec.cols);
            all.names.push(format!("cell_r{row}_c{col}"));
            all.sources.push(FeatureSource::Cell { row, col, edges });
        }
    }
    if include_edge_features {
        for (e, edge) in graph.edges().iter().enumerate() {
            all.names.push(format!("edge_{}", edge.id));
            all.sources.push(FeatureSource::Edge(e));
        }
    }
    let ids: Vec<usize> = (0..scenarios.len()).collect();
    let columns = all.columns(scenarios, &ids);
    let keep: Vec<usize> = (0..all.len()).filter(|&f| !columns[f].is_constant()).collect();
    if keep.is_empty() {
        return Err(Error::InvalidDataset("every grid/edge feature is constant".into()));
    }
    Ok(FeatureTable {
        names: keep.iter().map(|&f| all.names[f].clone()).collect(),
        sources: keep.into_iter().map(|f| all.sources[f].clone()).collect(),
    })
}
