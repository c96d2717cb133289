use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::graph::{PathSolution, RoadGraph};
use crate::error::{Error, Result};

#[derive(PartialEq)]
struct Label(f64, usize);

impl Eq for Label {}

impl Ord for Label {
    // min-heap on distance, then node position
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn trace_back(graph: &RoadGraph, pred: &[Option<usize>]) -> Result<Vec<usize>> {
    let mut edges = Vec::new();
    let mut at = graph.target();
    while at != graph.source() {
        let e = pred[at].ok_or(Error::Unreachable {
            from: graph.source(),
            target: graph.target(),
        })?;
        edges.push(e);
        at = graph.edges()[e].tail;
        if edges.len() > graph.n_nodes() {
            return Err(Error::InvalidGraph("predecessor chain contains a cycle".into()));
        }
    }
    edges.reverse();
    Ok(edges)
}

/// Dijkstra under positive `weights`. Among equal-cost predecessors the
/// smaller edge position wins.
pub fn shortest_path(graph: &RoadGraph, weights: &[f64]) -> Result<PathSolution> {
    graph.check_weights(weights)?;
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidParameter(alloc::format!("edge weights must be positive, got {w}")));
    }
    let n = graph.n_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[graph.source()] = 0.0;
    heap.push(Label(0.0, graph.source()));
    while let Some(Label(d, v)) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        if v == graph.target() {
            break;
        }
        for &e in graph.out_edges(v) {
            let h = graph.edges()[e].head;
            if done[h] {
                continue;
            }
            let nd = d + weights[e];
            if nd < dist[h] || (nd == dist[h] && pred[h].is_some_and(|p| e < p)) {
                dist[h] = nd;
                pred[h] = Some(e);
                heap.push(Label(nd, h));
            }
        }
    }
    let edges = trace_back(graph, &pred)?;
    PathSolution::from_edges(graph, edges, weights)
}

fn improves(candidate: f64, current: f64) -> bool {
    if current.is_infinite() {
        return candidate < current;
    }
    candidate < current - 1e-12 * (1.0 + current.abs())
}

/// Bellman-Ford over arbitrary-sign `costs` (edges relaxed in position
/// order). Returns the edge sequence and its cost; a negative cycle
/// reachable from the source is an error.
pub fn label_correcting_path(graph: &RoadGraph, costs: &[f64]) -> Result<(Vec<usize>, f64)> {
    graph.check_weights(costs)?;
    let n = graph.n_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[graph.source()] = 0.0;
    let mut changed = true;
    let mut rounds = 0;
    while changed {
        if rounds == n {
            let edge = graph
                .edges()
                .iter()
                .enumerate()
                .position(|(e, ed)| dist[ed.tail].is_finite() && improves(dist[ed.tail] + costs[e], dist[ed.head]));
            match edge {
                Some(edge) => return Err(Error::NegativeCycle { edge }),
                None => break,
            }
        }
        changed = false;
        rounds += 1;
        for (e, ed) in graph.edges().iter().enumerate() {
            if !dist[ed.tail].is_finite() {
                continue;
            }
            let nd = dist[ed.tail] + costs[e];
            if improves(nd, dist[ed.head]) {
                dist[ed.head] = nd;
                pred[ed.head] = Some(e);
                changed = true;
            }
        }
    }
    let edges = trace_back(graph, &pred)?;
    let cost = edges.iter().map(|&e| costs[e]).sum();
    Ok((edges, cost))
}
