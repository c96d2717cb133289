//! Small hand-checkable datasets.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{Dataset, FeatureColumn};

/// Three two-edge shortest path instances. Features are the costs of the
/// upper and the lower `s`-`t` edge; instance 0 uses the upper edge, 1 and 2
/// the lower one. Solution distance is 0 for the same path and 1 otherwise.
pub fn toy_example() -> Dataset {
    let features = vec![
        FeatureColumn::numeric("upper", vec![1.0, 1.9, 3.0]),
        FeatureColumn::numeric("lower", vec![1.4, 1.5, 1.4]),
    ];
    let dx = vec![
        vec![0.0, 1.0, 1.0],
        vec![1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
    ];
    Dataset::new(features, dx).expect("toy fixture is valid")
}

/// Edge indicator vectors `[upper, lower]` of the optimal toy paths.
pub fn toy_paths() -> Vec<Vec<f64>> {
    vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]]
}

/// Solution features (selection rate, best-group indicator) of the four
/// historic budget allocations.
pub fn knapsack_solution_features() -> Vec<Vec<f64>> {
    vec![
        vec![0.25, 0.0],
        vec![0.25, 0.0],
        vec![0.5, 1.0],
        vec![0.57, 1.0],
    ]
}

/// Four historic project-funding instances with five instance features:
/// budget, best group (categorical), high-ratio flag, project count and the
/// best/second-best group benefit ratio.
pub fn knapsack_example() -> Dataset {
    let features = vec![
        FeatureColumn::numeric("budget", vec![5.0, 14.0, 6.0, 12.0]),
        FeatureColumn::categorical(
            "best_group",
            &["healthcare", "education", "education", "healthcare"],
        ),
        FeatureColumn::numeric("ratio_above_2", vec![1.0, 1.0, 0.0, 0.0]),
        FeatureColumn::numeric("project_count", vec![8.0, 8.0, 8.0, 7.0]),
        FeatureColumn::numeric("group_ratio", vec![1.04, 1.07, 1.50, 1.33]),
    ];
    Dataset::from_solution_features(features, &knapsack_solution_features())
        .expect("knapsack fixture is valid")
}

/// The two-edge network of [`toy_example`]: edge 0 is the upper, edge 1 the
/// lower `s`-`t` edge.
pub fn toy_graph() -> crate::pathlab::RoadGraph {
    use crate::pathlab::{Edge, Node, RoadGraph};
    let nodes = vec![Node { id: 0, x: 0.0, y: 0.0 }, Node { id: 1, x: 1.0, y: 0.0 }];
    let edges = vec![Edge { id: 0, tail: 0, head: 1 }, Edge { id: 1, tail: 0, head: 1 }];
    RoadGraph::new(nodes, edges, 0, 1).expect("toy graph is valid")
}

/// Six nodes on a 2x3 lattice, source 0 (bottom left), target 5 (top
/// right). Without `cyclic` the edges point right, up or diagonally; with it
/// the reverse edges 4->1 and 5->2 are added.
pub fn six_node_graph(cyclic: bool) -> crate::pathlab::RoadGraph {
    use crate::pathlab::{Edge, Node, RoadGraph};
    let nodes = (0..6)
        .map(|v| Node {
            id: v as u64,
            x: (v % 3) as f64,
            y: (v / 3) as f64,
        })
        .collect();
    let mut arcs = vec![(0, 1), (1, 2), (0, 3), (1, 4), (2, 5), (3, 4), (4, 5), (0, 4), (3, 1), (1, 5)];
    if cyclic {
        arcs.extend([(4, 1), (5, 2)]);
    }
    let edges = arcs
        .into_iter()
        .enumerate()
        .map(|(e, (tail, head))| Edge { id: e as u64, tail, head })
        .collect();
    RoadGraph::new(nodes, edges, 0, 5).expect("six-node graph is valid")
}
