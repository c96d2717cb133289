//! Shortest-path lab: road graphs with per-scenario edge weights, spatial
//! grid features, path datasets and most-explainable paths.

mod dataset;
mod explain;
mod graph;
mod grid;
mod shortest;

pub use dataset::{build_path_dataset, hamming, PathDataset};
pub use explain::{most_explainable_path, relative_length, ExplainedPath, Weighting};
pub use graph::{Edge, Node, PathSolution, RoadGraph, ScenarioSet};
pub use grid::{build_grid_features, BoundingBox, FeatureSource, FeatureTable, GridSpec};
pub use shortest::{label_correcting_path, shortest_path};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::FeatureSelection;
    use alloc::vec;
    use alloc::vec::Vec;

    fn simple_paths(g: &RoadGraph) -> Vec<Vec<usize>> {
        fn dfs(g: &RoadGraph, v: usize, seen: &mut Vec<bool>, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if v == g.target() {
                out.push(stack.clone());
                return;
            }
            for &e in g.out_edges(v) {
                let h = g.edges()[e].head;
                if !seen[h] {
                    seen[h] = true;
                    stack.push(e);
                    dfs(g, h, seen, stack, out);
                    stack.pop();
                    seen[h] = false;
                }
            }
        }
        let mut seen = vec![false; g.n_nodes()];
        seen[g.source()] = true;
        let mut out = Vec::new();
        dfs(g, g.source(), &mut seen, &mut Vec::new(), &mut out);
        out
    }

    fn weights(seed: u64, m: usize) -> Vec<f64> {
        let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        (0..m)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                1.0 + (x % 1000) as f64 / 100.0
            })
            .collect()
    }

    #[test]
    fn toy_instance_takes_upper_edge() {
        let g = fixtures::toy_graph();
        let p = shortest_path(&g, &[1.0, 1.4]).unwrap();
        assert_eq!(p.edges, vec![0]);
        assert_eq!(p.cost, 1.0);
        // equal costs: smaller edge position
        assert_eq!(shortest_path(&g, &[2.0, 2.0]).unwrap().edges, vec![0]);
        assert!(shortest_path(&g, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn dijkstra_matches_enumeration() {
        for cyclic in [false, true] {
            let g = fixtures::six_node_graph(cyclic);
            let all = simple_paths(&g);
            for seed in 0..50 {
                let w = weights(seed, g.n_edges());
                let best = all
                    .iter()
                    .map(|p| p.iter().map(|&e| w[e]).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                let p = shortest_path(&g, &w).unwrap();
                assert!((p.cost - best).abs() < 1e-9);
                assert!(all.contains(&p.edges));
            }
        }
    }

    #[test]
    fn unreachable_and_bad_graphs() {
        let nodes = vec![Node { id: 0, x: 0.0, y: 0.0 }, Node { id: 1, x: 1.0, y: 0.0 }];
        let back = vec![Edge { id: 0, tail: 1, head: 0 }];
        assert!(matches!(RoadGraph::new(nodes.clone(), back, 0, 1), Err(crate::Error::Unreachable { .. })));
        assert!(RoadGraph::new(nodes.clone(), vec![], 0, 0).is_err());
        assert!(RoadGraph::new(nodes, vec![Edge { id: 0, tail: 0, head: 7 }], 0, 1).is_err());
    }

    fn path_data(g: &RoadGraph, n: usize, seed: u64) -> (ScenarioSet, FeatureTable, PathDataset) {
        let rows: Vec<Vec<f64>> = (0..n as u64).map(|s| weights(seed * 1000 + s, g.n_edges())).collect();
        let sc = ScenarioSet::new(rows, g.n_edges()).unwrap();
        let table = build_grid_features(g, &sc, &GridSpec::new(2, 2), true).unwrap();
        let ids: Vec<usize> = (0..n).collect();
        let data = build_path_dataset(g, &sc, &ids, &table).unwrap();
        (sc, table, data)
    }

    #[test]
    fn explainable_path_matches_enumeration() {
        let g = fixtures::six_node_graph(false);
        let all = simple_paths(&g);
        for seed in 0..20 {
            let (sc, table, data) = path_data(&g, 12, seed);
            let new_w = weights(seed + 99, g.n_edges());
            let row = table.row(&new_w);
            let sel = FeatureSelection::new(vec![0, table.len() - 1]).unwrap();
            for weighting in [Weighting::Uniform, Weighting::ExpWeighted] {
                let r = most_explainable_path(&g, &data, &sel, &row, &new_w, 3, weighting).unwrap();
                let best = all
                    .iter()
                    .map(|p| {
                        r.neighbors
                            .iter()
                            .zip(&r.neighbor_weights)
                            .map(|(&i, &w)| {
                                let ind = &data.paths[i].indicator;
                                let on: usize = p.iter().filter(|&&e| !ind[e]).count();
                                let off = ind.iter().filter(|&&b| b).count() - (p.len() - on);
                                w * (on + off) as f64
                            })
                            .sum::<f64>()
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!((r.score - best).abs() < 1e-9, "seed {seed}: {} vs {best}", r.score);
                assert!(relative_length(&r.path, &g, &new_w).unwrap() >= 1.0);
            }
            let _ = sc;
        }
    }

    #[test]
    fn single_neighbor_returns_its_path() {
        let g = fixtures::six_node_graph(false);
        let (sc, table, data) = path_data(&g, 8, 3);
        let sel = FeatureSelection::new(vec![0]).unwrap();
        let own = sc.scenario(4);
        let r = most_explainable_path(&g, &data, &sel, &table.row(own), own, 1, Weighting::Uniform).unwrap();
        assert_eq!(r.neighbors, vec![4]);
        assert_eq!(r.path.edges, data.paths[4].edges);
        assert_eq!(r.score, 0.0);
        assert_eq!(relative_length(&r.path, &g, own).unwrap(), 1.0);
        let e = most_explainable_path(&g, &data, &sel, &table.row(own), own, 1, Weighting::ExpWeighted).unwrap();
        assert_eq!(e.path, r.path);
    }

    #[test]
    fn grid_cells_partition_edges() {
        let g = fixtures::six_node_graph(true);
        let (sc, _, _) = path_data(&g, 6, 1);
        let table = build_grid_features(&g, &sc, &GridSpec::new(3, 3), false).unwrap();
        let mut count = vec![0; g.n_edges()];
        for s in &table.sources {
            let FeatureSource::Cell { edges, .. } = s else { panic!() };
            edges.iter().for_each(|&e| count[e] += 1);
        }
        assert!(count.iter().all(|&c| c == 1));
        let one = build_grid_features(&g, &sc, &GridSpec::new(1, 1), false).unwrap();
        assert_eq!(one.len(), 1);
        let w = sc.scenario(2);
        assert!((one.row(w)[0] - w.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn boundary_points_go_to_lower_cell() {
        let spec = GridSpec::new(2, 4);
        let b = BoundingBox {
            min_x: 0.0,
            min_y: 0.0,
            max_x: 4.0,
            max_y: 2.0,
        };
        assert_eq!(spec.cell_of(&b, 0.0, 0.0), (0, 0));
        assert_eq!(spec.cell_of(&b, 1.0, 1.0), (0, 0));
        assert_eq!(spec.cell_of(&b, 1.5, 1.5), (1, 1));
        assert_eq!(spec.cell_of(&b, 4.0, 2.0), (1, 3));
    }

    #[test]
    fn hamming_distances() {
        let g = fixtures::six_node_graph(false);
        let a = PathSolution::from_edges(&g, vec![0, 1, 4], &[1.0; 10]).unwrap();
        let b = PathSolution::from_edges(&g, vec![2, 5, 6], &[1.0; 10]).unwrap();
        assert_eq!(hamming(&a, &b), 6);
        assert_eq!(hamming(&a, &a), 0);
        assert!(PathSolution::from_edges(&g, vec![0, 4], &[1.0; 10]).is_err());
    }

    #[test]
    fn negative_cycle_is_reported() {
        let g = fixtures::six_node_graph(true);
        let mut c = vec![1.0; g.n_edges()];
        c[3] = -2.0; // 1 -> 4
        c[10] = -2.0; // 4 -> 1
        assert!(matches!(label_correcting_path(&g, &c), Err(crate::Error::NegativeCycle { .. })));
    }
}
