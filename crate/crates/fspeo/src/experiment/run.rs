use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use fspeo_core::pathlab::{
    build_grid_features, build_path_dataset, most_explainable_path, relative_length, FeatureTable, PathDataset,
    RoadGraph, ScenarioSet,
};
use fspeo_core::solvers::{k_opt_search_with, random_selections, KOptConfig};
use fspeo_core::{derive_seed, evaluate_objective, EvalConfig, Error, FeatureSelection, TieMode};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{DataSource, ExperimentConfig};
use super::synthetic::generate_road_network;
use crate::executor::Parallel;
use crate::manifest::{self, RunManifest};

pub const METHODS: [&str; 3] = ["kopt", "random", "all_edges"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub repeat: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub method: String,
    pub mean_relative_length: f64,
    /// Pessimistic training objective (mean over draws for `random`).
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub method: String,
    pub mean_relative_length: f64,
    pub mean_objective: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub n_scenarios: usize,
    pub feature_names: Vec<String>,
    pub n_edge_features: usize,
    /// Selected feature indices per (repeat, L) for `kopt`.
    pub selections: Vec<(usize, usize, Vec<usize>)>,
    /// Evaluation instances skipped because the explainable-path search hit
    /// a negative cycle.
    pub negative_cycle_failures: usize,
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<SummaryRow>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

/// Network and scenarios named by the config.
pub fn load_data(cfg: &ExperimentConfig) -> Result<(RoadGraph, ScenarioSet)> {
    match &cfg.data {
        DataSource::Synthetic(net) => generate_road_network(net, derive_seed(cfg.seed, u64::MAX)),
        DataSource::Directory {
            path,
            source,
            target,
            invert_weights,
        } => crate::io::load_directory(path, *source, *target, *invert_weights),
    }
}

struct Evaluation<'a> {
    graph: &'a RoadGraph,
    scenarios: &'a ScenarioSet,
    eval_ids: &'a [usize],
    cfg: &'a ExperimentConfig,
}

impl Evaluation<'_> {
    /// Mean relative length over the held-out scenarios and the number of
    /// scenarios skipped because of negative cycles.
    fn mean_relative_length(
        &self,
        data: &PathDataset,
        table: &FeatureTable,
        sel: &FeatureSelection,
    ) -> Result<(f64, usize)> {
        let mut total = 0.0;
        let mut used = 0usize;
        let mut failures = 0usize;
        for &s in self.eval_ids {
            let w = self.scenarios.scenario(s);
            match most_explainable_path(self.graph, data, sel, &table.row(w), w, self.cfg.k, self.cfg.weighting) {
                Ok(r) => {
                    total += relative_length(&r.path, self.graph, w)?;
                    used += 1;
                }
                Err(Error::NegativeCycle { .. }) => failures += 1,
                Err(e) => return Err(e.into()),
            }
        }
        ensure!(used > 0, "every evaluation scenario hit a negative cycle");
        Ok((total / used as f64, failures))
    }
}

fn check_config(cfg: &ExperimentConfig, scenarios: &ScenarioSet) -> Result<()> {
    ensure!(cfg.repeats >= 1, "repeats must be at least 1");
    ensure!(cfg.n_eval >= 1, "n_eval must be at least 1");
    ensure!(cfg.random_baseline_repeats >= 1, "random_baseline_repeats must be at least 1");
    ensure!(!cfg.l_values.is_empty(), "l_values must not be empty");
    ensure!(cfg.k >= 1 && cfg.k < cfg.n_train, "k must lie in 1..n_train");
    if cfg.n_train + cfg.n_eval > scenarios.len() {
        bail!(
            "n_train + n_eval = {} exceeds the {} available scenarios",
            cfg.n_train + cfg.n_eval,
            scenarios.len()
        );
    }
    Ok(())
}

pub fn run_experiment(
    cfg: &ExperimentConfig,
    graph: &RoadGraph,
    scenarios: &ScenarioSet,
    par: &Parallel,
) -> Result<ExperimentResult> {
    check_config(cfg, scenarios)?;
    let mut timings = Vec::new();
    let started = Instant::now();
    let table = build_grid_features(graph, scenarios, &cfg.grid, cfg.include_edge_features)?;
    let edge_table = build_grid_features(graph, scenarios, &cfg.grid, true)?.edge_columns();
    ensure!(!edge_table.is_empty(), "every edge weight is constant across scenarios");
    let p = table.len();
    if let Some(&l) = cfg.l_values.iter().find(|&&l| l == 0 || l > p) {
        bail!("L={l} is outside 1..={p} (number of non-constant features)");
    }
    timings.push(("features".to_string(), started.elapsed().as_secs_f64()));

    let eval_cfg = EvalConfig::new(cfg.k, TieMode::Pessimistic);
    let mut rows = Vec::new();
    let mut selections = Vec::new();
    let mut failures = 0;
    for repeat in 0..cfg.repeats {
        let t = Instant::now();
        let repeat_seed = derive_seed(cfg.seed, repeat as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(repeat_seed);
        let sample = index::sample(&mut rng, scenarios.len(), cfg.n_train + cfg.n_eval).into_vec();
        let (train_ids, eval_ids) = sample.split_at(cfg.n_train);
        let data = build_path_dataset(graph, scenarios, train_ids, &table)?;
        let edge_data = PathDataset {
            dataset: fspeo_core::Dataset::new(edge_table.columns(scenarios, train_ids), data.dataset.solution_distance_rows())?,
            paths: data.paths.clone(),
            scenario_ids: data.scenario_ids.clone(),
        };
        let ev = Evaluation {
            graph,
            scenarios,
            eval_ids,
            cfg,
        };

        let all_edges = FeatureSelection::new((0..edge_table.len()).collect())?;
        let edge_objective = evaluate_objective(&edge_data.dataset, &all_edges, &eval_cfg)?;
        let (edge_length, edge_failures) = ev.mean_relative_length(&edge_data, &edge_table, &all_edges)?;
        failures += edge_failures;

        let per_l: Vec<Result<(usize, Vec<usize>, [ExperimentRow; 2])>> = par.install(|| {
            cfg.l_values
                .par_iter()
                .map(|&l| -> Result<_> {
                    let mut fails = 0;
                    let selection = if l >= p {
                        FeatureSelection::new((0..p).collect())?
                    } else {
                        let kcfg = KOptConfig {
                            max_features: l,
                            seed: derive_seed(repeat_seed, 1000 + l as u64),
                            swap_size: cfg.kopt.swap_size.min(l).min(p - l),
                            ..cfg.kopt
                        };
                        k_opt_search_with(&data.dataset, &kcfg, &eval_cfg, par)?.best_selection
                    };
                    let objective = evaluate_objective(&data.dataset, &selection, &eval_cfg)?;
                    let (length, f) = ev.mean_relative_length(&data, &table, &selection)?;
                    fails += f;
                    let draws = random_selections(p, l, cfg.random_baseline_repeats, derive_seed(repeat_seed, 2000 + l as u64))?;
                    let (mut r_obj, mut r_len) = (0.0, 0.0);
                    for s in &draws {
                        r_obj += evaluate_objective(&data.dataset, s, &eval_cfg)?;
                        let (len, f) = ev.mean_relative_length(&data, &table, s)?;
                        r_len += len;
                        fails += f;
                    }
                    let n = draws.len() as f64;
                    Ok((
                        fails,
                        selection.into_vec(),
                        [
                            ExperimentRow {
                                repeat,
                                l,
                                method: METHODS[0].into(),
                                mean_relative_length: length,
                                objective,
                            },
                            ExperimentRow {
                                repeat,
                                l,
                                method: METHODS[1].into(),
                                mean_relative_length: r_len / n,
                                objective: r_obj / n,
                            },
                        ],
                    ))
                })
                .collect()
        });
        for (&l, res) in cfg.l_values.iter().zip(per_l) {
            let (fails, selection, [kopt, random]) = res?;
            failures += fails;
            selections.push((repeat, l, selection));
            rows.push(kopt);
            rows.push(random);
            rows.push(ExperimentRow {
                repeat,
                l,
                method: METHODS[2].into(),
                mean_relative_length: edge_length,
                objective: edge_objective,
            });
        }
        timings.push((format!("repeat_{repeat}"), t.elapsed().as_secs_f64()));
    }
    timings.push(("total".to_string(), started.elapsed().as_secs_f64()));

    let mut summary = Vec::new();
    for &l in &cfg.l_values {
        for method in METHODS {
            let sel: Vec<&ExperimentRow> = rows.iter().filter(|r| r.l == l && r.method == method).collect();
            let n = sel.len() as f64;
            summary.push(SummaryRow {
                l,
                method: method.to_string(),
                mean_relative_length: sel.iter().map(|r| r.mean_relative_length).sum::<f64>() / n,
                mean_objective: sel.iter().map(|r| r.objective).sum::<f64>() / n,
                repeats: sel.len(),
            });
        }
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        n_nodes: graph.n_nodes(),
        n_edges: graph.n_edges(),
        n_scenarios: scenarios.len(),
        feature_names: table.names.clone(),
        n_edge_features: edge_table.len(),
        selections,
        negative_cycle_failures: failures,
        rows,
        summary,
        timings,
    })
}

/// Writes `<stem>.csv` (one row per repeat, L and method),
/// `<stem>.summary.json` and `<stem>.manifest.json`; returns their paths.
pub fn write_outputs(result: &ExperimentResult, stem: &Path, mut manifest: RunManifest) -> Result<Vec<PathBuf>> {
    let csv_path = stem.with_file_name(format!("{}.csv", manifest::file_name(stem)));
    let summary_path = manifest::sibling(&csv_path, "summary.json");
    let manifest_path = manifest::manifest_path(&csv_path);
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let mut w = csv::Writer::from_path(&csv_path).with_context(|| format!("cannot write {}", csv_path.display()))?;
    for row in &result.rows {
        w.serialize(row)?;
    }
    w.flush()?;

    let mut summary = serde_json::to_value(result)?;
    summary["manifest"] = manifest::file_name(&manifest_path).into();
    crate::io::write_json(&summary_path, &summary)?;

    manifest.add_output(&csv_path);
    manifest.add_output(&summary_path);
    for (phase, secs) in &result.timings {
        manifest.timings.insert(phase.clone(), *secs);
    }
    manifest.write(&manifest_path)?;
    Ok(vec![csv_path, summary_path, manifest_path])
}
