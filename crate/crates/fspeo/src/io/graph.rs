use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fspeo_core::pathlab::{Edge, Node, RoadGraph, ScenarioSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub id: u64,
    pub tail: u64,
    pub head: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: Vec<Node>,
    pub edges: Vec<EdgeFile>,
    pub source: u64,
    pub target: u64,
}

fn assemble(nodes: Vec<Node>, edges: Vec<EdgeFile>, source: u64, target: u64) -> Result<RoadGraph> {
    let mut pos = HashMap::with_capacity(nodes.len());
    for (i, v) in nodes.iter().enumerate() {
        if pos.insert(v.id, i).is_some() {
            bail!("duplicate node id {}", v.id);
        }
    }
    let node = |id: u64| pos.get(&id).copied().with_context(|| format!("unknown node id {id}"));
    let mut seen = HashMap::new();
    let mut out = Vec::with_capacity(edges.len());
    for e in &edges {
        if seen.insert(e.id, ()).is_some() {
            bail!("duplicate edge id {}", e.id);
        }
        out.push(Edge {
            id: e.id,
            tail: node(e.tail)?,
            head: node(e.head)?,
        });
    }
    Ok(RoadGraph::new(nodes, out, node(source)?, node(target)?)?)
}

pub fn read_graph_json(path: &Path) -> Result<RoadGraph> {
    let file: GraphFile = serde_json::from_str(&super::read_text(path)?)
        .with_context(|| format!("{} is not a graph file", path.display()))?;
    assemble(file.nodes, file.edges, file.source, file.target)
}

pub fn write_graph_json(graph: &RoadGraph, path: &Path) -> Result<()> {
    let nodes = graph.nodes();
    let file = GraphFile {
        nodes: nodes.to_vec(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeFile {
                id: e.id,
                tail: nodes[e.tail].id,
                head: nodes[e.head].id,
            })
            .collect(),
        source: nodes[graph.source()].id,
        target: nodes[graph.target()].id,
    };
    super::write_json(path, &file)
}

fn read_csv<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    rdr.deserialize()
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("malformed rows in {}", path.display()))
}

/// `nodes.csv` (`id,x,y`) and `edges.csv` (`id,tail,head`).
pub fn read_graph_csv(nodes: &Path, edges: &Path, source: u64, target: u64) -> Result<RoadGraph> {
    assemble(read_csv(nodes)?, read_csv(edges)?, source, target)
}

/// Columns are matched to the graph's edges by id; extra columns are an
/// error.
pub fn read_scenarios_csv(path: &Path, graph: &RoadGraph) -> Result<ScenarioSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let header: Vec<u64> = rdr
        .headers()?
        .iter()
        .map(|h| h.parse::<u64>().with_context(|| format!("scenario header '{h}' is not an edge id")))
        .collect::<Result<_>>()?;
    let by_id: HashMap<u64, usize> = graph.edges().iter().enumerate().map(|(e, edge)| (edge.id, e)).collect();
    let column_of: Vec<usize> = header
        .iter()
        .map(|id| by_id.get(id).copied().with_context(|| format!("scenario column {id} is not an edge")))
        .collect::<Result<_>>()?;
    if header.len() != graph.n_edges() {
        bail!("scenario file has {} columns, graph has {} edges", header.len(), graph.n_edges());
    }
    let mut rows = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut row = vec![0.0; graph.n_edges()];
        for (c, field) in rec.iter().enumerate() {
            row[column_of[c]] = field
                .parse()
                .with_context(|| format!("scenario row {}: '{field}' is not a number", r + 1))?;
        }
        rows.push(row);
    }
    Ok(ScenarioSet::new(rows, graph.n_edges())?)
}

pub fn write_scenarios_csv(scenarios: &ScenarioSet, graph: &RoadGraph, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(graph.edges().iter().map(|e| e.id.to_string()))?;
    for s in 0..scenarios.len() {
        w.write_record(scenarios.scenario(s).iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Data directory layout: `nodes.csv`, `edges.csv`, `scenarios.csv`. With
/// `invert`, weights are replaced by their reciprocals.
pub fn load_directory(dir: &Path, source: u64, target: u64, invert: bool) -> Result<(RoadGraph, ScenarioSet)> {
    let graph = read_graph_csv(&dir.join("nodes.csv"), &dir.join("edges.csv"), source, target)?;
    let scenarios = read_scenarios_csv(&dir.join("scenarios.csv"), &graph)?;
    Ok((graph, if invert { scenarios.inverted() } else { scenarios }))
}
