use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Node {
    pub id: u64,
    pub x: f64,
    pub y: f64,
}

/// Directed edge between node positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub id: u64,
    pub tail: usize,
    pub head: usize,
}

/// Directed road network with one source/target pair. Nodes and edges are
/// addressed by position; `id`s are external labels only.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoadGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    source: usize,
    target: usize,
    #[cfg_attr(feature = "serde", serde(skip))]
    out_edges: Vec<Vec<usize>>,
}

impl RoadGraph {
    /// Checks endpoints, finite coordinates, `source != target`, no
    /// self-loops and that `target` is reachable from `source`.
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, source: usize, target: usize) -> Result<Self> {
        let n = nodes.len();
        if source >= n || target >= n {
            return Err(Error::InvalidGraph(format!("source/target outside 0..{n}")));
        }
        if source == target {
            return Err(Error::InvalidGraph("source and target coincide".into()));
        }
        if nodes.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::InvalidGraph("node coordinates must be finite".into()));
        }
        let mut out_edges = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.tail >= n || edge.head >= n {
                return Err(Error::InvalidGraph(format!("edge {} has an endpoint outside 0..{n}", edge.id)));
            }
            if edge.tail == edge.head {
                return Err(Error::InvalidGraph(format!("edge {} is a self-loop", edge.id)));
            }
            out_edges[edge.tail].push(e);
        }
        let g = Self {
            nodes,
            edges,
            source,
            target,
            out_edges,
        };
        if !g.reachable_from_source()[target] {
            return Err(Error::Unreachable { from: source, target });
        }
        Ok(g)
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &self.out_edges[v] {
                let h = self.edges[e].head;
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Rebuilds adjacency after deserialization.
    pub fn reindexed(self) -> Result<Self> {
        Self::new(self.nodes, self.edges, self.source, self.target)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Edge positions leaving node `v`, ascending.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn midpoint(&self, e: usize) -> (f64, f64) {
        let edge = self.edges[e];
        let (a, b) = (self.nodes[edge.tail], self.nodes[edge.head]);
        ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    }

    /// Same graph with a different source/target pair.
    pub fn with_endpoints(&self, source: usize, target: usize) -> Result<Self> {
        Self::new(self.nodes.clone(), self.edges.clone(), source, target)
    }

    pub(crate) fn check_weights(&self, weights: &[f64]) -> Result<()> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} edge weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        Ok(())
    }
}

/// Scenario-by-edge weight matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioSet {
    n_edges: usize,
    weights: Vec<f64>,
}

impl ScenarioSet {
    /// Every entry must be positive and finite.
    pub fn new(rows: Vec<Vec<f64>>, n_edges: usize) -> Result<Self> {
        let mut weights = Vec::with_capacity(rows.len() * n_edges);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != n_edges {
                return Err(Error::InvalidParameter(format!(
                    "scenario {s} has {} weights, expected {n_edges}",
                    row.len()
                )));
            }
            if let Some(w) = row.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                return Err(Error::InvalidParameter(format!("scenario {s} has non-positive weight {w}")));
            }
            weights.extend_from_slice(row);
        }
        Ok(Self { n_edges, weights })
    }

    pub fn len(&self) -> usize {
        if self.n_edges == 0 {
            0
        } else {
            self.weights.len() / self.n_edges
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn scenario(&self, s: usize) -> &[f64] {
        &self.weights[s * self.n_edges..(s + 1) * self.n_edges]
    }

    /// Elementwise reciprocal (velocities to travel times per unit length).
    pub fn inverted(&self) -> Self {
        Self {
            n_edges: self.n_edges,
            weights: self.weights.iter().map(|w| 1.0 / w).collect(),
        }
    }
}

/// A source-target path.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSolution {
    /// Edge positions in travel order.
    pub edges: Vec<usize>,
    /// Edge-membership indicator, length = edge count.
    pub indicator: Vec<bool>,
    /// Cost under the weights the path was computed or evaluated with.
    pub cost: f64,
}

impl PathSolution {
    /// Validates that `edges` is a simple source-target path of `graph`.
    pub fn from_edges(graph: &RoadGraph, edges: Vec<usize>, weights: &[f64]) -> Result<Self> {
        graph.check_weights(weights)?;
        let mut indicator = vec![false; graph.n_edges()];
        let mut visited = vec![false; graph.n_nodes()];
        let mut at = graph.source();
        visited[at] = true;
        for &e in &edges {
            let edge = graph.edges().get(e).ok_or(Error::IndexOutOfRange {
                index: e,
                len: graph.n_edges(),
            })?;
            if edge.tail != at || visited[edge.head] {
                return Err(Error::InvalidGraph(format!("edge sequence is not a simple path at edge {e}")));
            }
            at = edge.head;
            visited[at] = true;
            indicator[e] = true;
        }
        if at != graph.target() {
            return Err(Error::InvalidGraph("path does not end at the target".into()));
        }
        let cost = edges.iter().map(|&e| weights[e]).sum();
        Ok(Self { edges, indicator, cost })
    }

    /// Cost of this path under `weights`.
    pub fn cost_under(&self, weights: &[f64]) -> f64 {
        self.edges.iter().map(|&e| weights[e]).sum()
    }
}
