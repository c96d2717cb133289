use anyhow::{ensure, Result};
use fspeo_core::pathlab::{Edge, Node, RoadGraph, ScenarioSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use super::config::SyntheticNetwork;

/// Lattice of `rows x cols` jittered nodes with edges to the right and
/// upwards (plus their reverses when `bidirectional`); source is the
/// bottom-left, target the top-right node.
///
/// Scenario weight of edge `e`: `base_e * zone(e) * noise`, where `base_e`
/// is the edge length times a fixed lognormal factor, `zone(e)` is the
/// scenario's lognormal factor of the congestion zone containing the edge
/// midpoint and `noise` is independent lognormal noise.
pub fn generate_road_network(cfg: &SyntheticNetwork, seed: u64) -> Result<(RoadGraph, ScenarioSet)> {
    ensure!(cfg.rows >= 1 && cfg.cols >= 1 && cfg.rows * cfg.cols >= 2, "network needs at least two nodes");
    ensure!(cfg.zone_rows >= 1 && cfg.zone_cols >= 1, "at least one congestion zone is required");
    ensure!(cfg.scenarios >= 1, "at least one scenario is required");
    ensure!((0.0..0.5).contains(&cfg.jitter), "jitter must lie in [0, 0.5)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |r: usize, c: usize| r * cfg.cols + c;
    let mut nodes = Vec::with_capacity(cfg.rows * cfg.cols);
    for r in 0..cfg.rows {
        for c in 0..cfg.cols {
            let dx = if cfg.jitter > 0.0 { rng.random_range(-cfg.jitter..cfg.jitter) } else { 0.0 };
            let dy = if cfg.jitter > 0.0 { rng.random_range(-cfg.jitter..cfg.jitter) } else { 0.0 };
            nodes.push(Node {
                id: id(r, c) as u64,
                x: c as f64 + dx,
                y: r as f64 + dy,
            });
        }
    }
    let mut arcs = Vec::new();
    for r in 0..cfg.rows {
        for c in 0..cfg.cols {
            if c + 1 < cfg.cols {
                arcs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < cfg.rows {
                arcs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    if cfg.bidirectional {
        let reverse: Vec<_> = arcs.iter().map(|&(a, b)| (b, a)).collect();
        arcs.extend(reverse);
    }
    let edges: Vec<Edge> = arcs
        .iter()
        .enumerate()
        .map(|(e, &(tail, head))| Edge { id: e as u64, tail, head })
        .collect();
    let graph = RoadGraph::new(nodes, edges, 0, id(cfg.rows - 1, cfg.cols - 1))?;

    let base_noise = LogNormal::new(0.0, cfg.base_sigma)?;
    let base: Vec<f64> = graph
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (graph.nodes()[e.tail], graph.nodes()[e.head]);
            (a.x - b.x).hypot(a.y - b.y) * base_noise.sample(&mut rng)
        })
        .collect();
    let (w, h) = ((cfg.cols.max(2) - 1) as f64, (cfg.rows.max(2) - 1) as f64);
    let zone: Vec<usize> = (0..graph.n_edges())
        .map(|e| {
            let (x, y) = graph.midpoint(e);
            let zc = ((x / w * cfg.zone_cols as f64).floor().max(0.0) as usize).min(cfg.zone_cols - 1);
            let zr = ((y / h * cfg.zone_rows as f64).floor().max(0.0) as usize).min(cfg.zone_rows - 1);
            zr * cfg.zone_cols + zc
        })
        .collect();
    let zone_dist = LogNormal::new(0.0, cfg.zone_sigma)?;
    let edge_dist = LogNormal::new(0.0, cfg.edge_sigma)?;
    let rows: Vec<Vec<f64>> = (0..cfg.scenarios)
        .map(|_| {
            let factors: Vec<f64> = (0..cfg.zone_rows * cfg.zone_cols).map(|_| zone_dist.sample(&mut rng)).collect();
            (0..graph.n_edges())
                .map(|e| base[e] * factors[zone[e]] * edge_dist.sample(&mut rng))
                .collect()
        })
        .collect();
    let scenarios = ScenarioSet::new(rows, graph.n_edges())?;
    Ok((graph, scenarios))
}
