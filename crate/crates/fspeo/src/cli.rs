//! Command-line interface.
//!
//! Every command prints a human-readable report, or JSON with `--json`.
//! With `--output PATH` the primary result is also written to `PATH` (for
//! `export-mip` the LP model, for `experiment` the file stem) together with
//! `<stem>.manifest.json`; JSON results name that manifest in a `manifest`
//! field. Exit codes: 0 success, 1 runtime error, 2 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fspeo_core::eval::DEFAULT_TIE_TOLERANCE;
use fspeo_core::hardness::{predicted_objective, reduce_max_coverage};
use fspeo_core::mip::{
    build_optimistic_mip, build_pessimistic_mip, crosscheck_solution, optimistic_certificate, pessimistic_certificate,
    selection_from_solution, AlphaBoundRule, KConstraint, MipModel, PessimisticOptions, SolutionValues,
};
use fspeo_core::solvers::{
    exact_enumeration_with, k_opt_search_with, random_selection_baseline_with, KOptConfig, DEFAULT_ENUMERATION_BUDGET,
};
use fspeo_core::synthetic::generate_synthetic_dataset;
use fspeo_core::{evaluate_selection, Dataset, EvalConfig, FeatureSelection, TieMode};
use serde_json::{json, Value};

use crate::executor::Parallel;
use crate::experiment::{self, DataSource, ExperimentConfig};
use crate::io;
use crate::manifest::{self, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "fspeo", version, about = "Instance feature selection for explainable optimization")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Random seed (default 0; overrides the experiment config when given).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Tie tolerance of the neighbor classification.
    #[arg(long, global = true, default_value_t = DEFAULT_TIE_TOLERANCE)]
    pub tol: f64,
    /// Result file (see the command help for what is written).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Pessimistic,
    Optimistic,
}

impl From<Mode> for TieMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Pessimistic => TieMode::Pessimistic,
            Mode::Optimistic => TieMode::Optimistic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormulationArg {
    Optimistic,
    Pessimistic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlphaBoundArg {
    /// Enumerated bounds when affordable, lemma otherwise.
    Auto,
    Lemma,
    Enumerated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EvalKArg {
    Equality,
    Inequality,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Dataset JSON file.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Neighborhood size.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Pessimistic)]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Objective of one selection with the per-point breakdown.
    Evaluate {
        #[command(flatten)]
        data: DatasetArgs,
        /// Comma-separated feature indices or names.
        #[arg(long)]
        selection: String,
    },
    /// Multi-start K-opt swap search.
    Select {
        #[command(flatten)]
        data: DatasetArgs,
        /// Selection size L.
        #[arg(long = "L", alias = "l", default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        swap_size: usize,
        #[arg(long, default_value_t = 1000)]
        max_moves: usize,
        /// Improvements per pass before a new pass starts (0 disables).
        #[arg(long, default_value_t = 10)]
        cutoff: usize,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
    },
    /// Exhaustive search over all selections with at most L features.
    Exact {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long = "L", alias = "l", default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
    },
    /// Objective statistics of uniformly random size-L selections.
    BaselineRandom {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long = "L", alias = "l", default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
    },
    /// Writes a MIP model in LP format to --output; optionally runs a solver.
    ExportMip {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long = "L", alias = "l", default_value_t = 1)]
        l: usize,
        #[arg(long, value_enum, default_value_t = FormulationArg::Pessimistic)]
        formulation: FormulationArg,
        /// Big-M of the optimistic model (default: from the data).
        #[arg(long)]
        big_m: Option<f64>,
        #[arg(long, value_enum, default_value_t = AlphaBoundArg::Auto)]
        alpha_bound: AlphaBoundArg,
        /// Dualization of the neighbor-count row of the pessimistic model.
        #[arg(long, value_enum, default_value_t = EvalKArg::Equality)]
        eval_k: EvalKArg,
        /// Selection written as a commented start hint.
        #[arg(long)]
        start: Option<String>,
        /// Solver command; `{model}` and `{solution}` are replaced by paths.
        /// The solution file must list `name value` lines and an
        /// `objective` line.
        #[arg(long)]
        solver_cmd: Option<String>,
    },
    /// Re-evaluates a solver's selection and compares objectives.
    CheckSolution {
        #[command(flatten)]
        data: DatasetArgs,
        /// `name value` listing; `b_<f> > 0.5` marks selected features.
        #[arg(long)]
        solution: PathBuf,
        /// Claimed objective (default: the file's `objective` line).
        #[arg(long)]
        claimed: Option<f64>,
    },
    /// Builds the feature-selection instance of a Maximum Coverage input.
    ReduceMc {
        /// Coverage instance JSON.
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated subset indices; reports the predicted objective.
        #[arg(long)]
        cover: Option<String>,
    },
    /// Shortest-path experiment; --output is the file stem.
    Experiment {
        /// Experiment config JSON (all fields optional).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Data directory with nodes.csv, edges.csv, scenarios.csv.
        #[arg(long, env = "FSPEO_DATA_DIR")]
        data_dir: Option<PathBuf>,
        /// Source node id (with --data-dir).
        #[arg(long)]
        source: Option<u64>,
        /// Target node id (with --data-dir).
        #[arg(long)]
        target: Option<u64>,
        /// Use reciprocal weights (with --data-dir).
        #[arg(long)]
        invert_weights: bool,
    },
    /// Random dataset with numeric instance features.
    GenSynthetic {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        p: usize,
        /// Solution feature dimension.
        #[arg(long, default_value_t = 3)]
        q: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

struct Report {
    json: Value,
    text: String,
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("'{t}' is not an index")))
        .collect()
}

fn parse_selection(ds: &Dataset, text: &str) -> Result<FeatureSelection> {
    let indices = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(i) => Ok(i),
            Err(_) => ds.feature_index(t).with_context(|| format!("no feature named '{t}'")),
        })
        .collect::<Result<Vec<_>>>()?;
    let sel = FeatureSelection::new(indices)?;
    ds.check_selection(&sel)?;
    Ok(sel)
}

fn names(ds: &Dataset, sel: &FeatureSelection) -> Vec<String> {
    sel.iter().map(|f| ds.features()[f].name().to_string()).collect()
}

fn eval_config(data: &DatasetArgs, g: &GlobalArgs) -> EvalConfig {
    EvalConfig::new(data.k, data.mode.into()).with_tolerance(g.tol)
}

fn seed(g: &GlobalArgs) -> u64 {
    g.seed.unwrap_or(0)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Evaluate { .. } => "evaluate",
        Command::Select { .. } => "select",
        Command::Exact { .. } => "exact",
        Command::BaselineRandom { .. } => "baseline-random",
        Command::ExportMip { .. } => "export-mip",
        Command::CheckSolution { .. } => "check-solution",
        Command::ReduceMc { .. } => "reduce-mc",
        Command::Experiment { .. } => "experiment",
        Command::GenSynthetic { .. } => "gen-synthetic",
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let par = Parallel::new(g.threads)?;
    let started = Instant::now();
    let mut manifest = RunManifest::new(command_name(&cli.command), Value::Null, vec![seed(g)]);
    let report = match &cli.command {
        Command::Evaluate { data, selection } => {
            let ds = io::read_dataset(&data.dataset)?;
            manifest.add_input(&data.dataset)?;
            let sel = parse_selection(&ds, selection)?;
            let cfg = eval_config(data, g);
            manifest.config = json!({ "selection": sel, "eval": cfg });
            let r = evaluate_selection(&ds, &sel, &cfg)?;
            let mut text = format!("objective: {}\n", r.objective);
            for (i, p) in r.per_point.iter().enumerate() {
                text.push_str(&format!("point {i}: contribution {} neighbors {:?}\n", p.contribution, p.neighbors));
            }
            Report {
                json: json!({
                    "selection": sel,
                    "feature_names": names(&ds, &sel),
                    "k": cfg.k,
                    "mode": cfg.mode,
                    "tie_tolerance": cfg.tie_tolerance,
                    "objective": r.objective,
                    "per_point": r.per_point.iter().enumerate().map(|(i, p)| json!({
                        "point": i, "contribution": p.contribution, "neighbors": p.neighbors,
                    })).collect::<Vec<_>>(),
                }),
                text,
            }
        }
        Command::Select {
            data,
            l,
            swap_size,
            max_moves,
            cutoff,
            starts,
            restarts,
        } => {
            let ds = io::read_dataset(&data.dataset)?;
            manifest.add_input(&data.dataset)?;
            let cfg = eval_config(data, g);
            let kcfg = KOptConfig {
                swap_size: *swap_size,
                max_sampled_moves: *max_moves,
                improving_moves_cutoff: if *cutoff == 0 { usize::MAX } else { *cutoff },
                start_candidates: *starts,
                restarts: *restarts,
                seed: seed(g),
                max_features: *l,
            };
            manifest.config = json!({ "kopt": kcfg, "eval": cfg });
            let r = k_opt_search_with(&ds, &kcfg, &cfg, &par)?;
            Report {
                text: format!(
                    "selection: {} {:?}\nobjective: {}\n",
                    r.best_selection,
                    names(&ds, &r.best_selection),
                    r.best_objective
                ),
                json: json!({
                    "selection": r.best_selection,
                    "feature_names": names(&ds, &r.best_selection),
                    "objective": r.best_objective,
                    "evaluations": r.evaluations,
                    "trace": r.trace,
                }),
            }
        }
        Command::Exact { data, l, budget } => {
            let ds = io::read_dataset(&data.dataset)?;
            manifest.add_input(&data.dataset)?;
            let cfg = eval_config(data, g);
            manifest.config = json!({ "L": l, "budget": budget.to_string(), "eval": cfg });
            let r = exact_enumeration_with(&ds, *l, &cfg, *budget, &par)?;
            Report {
                text: format!(
                    "selection: {} {:?}\nobjective: {}\n",
                    r.best_selection,
                    names(&ds, &r.best_selection),
                    r.best_objective
                ),
                json: json!({
                    "selection": r.best_selection,
                    "feature_names": names(&ds, &r.best_selection),
                    "objective": r.best_objective,
                    "evaluations": r.evaluations,
                }),
            }
        }
        Command::BaselineRandom { data, l, repeats } => {
            let ds = io::read_dataset(&data.dataset)?;
            manifest.add_input(&data.dataset)?;
            let cfg = eval_config(data, g);
            manifest.config = json!({ "L": l, "repeats": repeats, "eval": cfg });
            let s = random_selection_baseline_with(&ds, *l, *repeats, &cfg, seed(g), &par)?;
            Report {
                text: format!("mean: {}\nstd: {}\nmin: {}\nmax: {}\n", s.mean, s.std, s.min, s.max),
                json: serde_json::to_value(&s)?,
            }
        }
        Command::ExportMip {
            data,
            l,
            formulation,
            big_m,
            alpha_bound,
            eval_k,
            start,
            solver_cmd,
        } => {
            let Some(path) = &g.output else {
                bail!("export-mip needs --output for the model file");
            };
            let ds = io::read_dataset(&data.dataset)?;
            manifest.add_input(&data.dataset)?;
            let opts = PessimisticOptions {
                alpha_bounds: match alpha_bound {
                    AlphaBoundArg::Auto => AlphaBoundRule::default(),
                    AlphaBoundArg::Lemma => AlphaBoundRule::Lemma,
                    AlphaBoundArg::Enumerated => AlphaBoundRule::Enumerated {
                        budget: DEFAULT_ENUMERATION_BUDGET,
                    },
                },
                k_constraint: match eval_k {
                    EvalKArg::Equality => KConstraint::Equality,
                    EvalKArg::Inequality => KConstraint::Inequality,
                },
            };
            let (mut model, mode) = match formulation {
                FormulationArg::Optimistic => (build_optimistic_mip(&ds, *l, data.k, *big_m)?, TieMode::Optimistic),
                FormulationArg::Pessimistic => (build_pessimistic_mip(&ds, *l, data.k, &opts)?, TieMode::Pessimistic),
            };
            if let Some(start) = start {
                let sel = parse_selection(&ds, start)?;
                let values = match formulation {
                    FormulationArg::Optimistic => optimistic_certificate(&ds, &model, &sel, data.k)?,
                    FormulationArg::Pessimistic => pessimistic_certificate(&ds, &model, &sel, data.k)?,
                };
                model.set_start_hint(values.into_iter().enumerate().filter(|(_, x)| *x != 0.0).collect());
            }
            manifest.config = json!({
                "formulation": model.metadata.formulation, "L": l, "k": data.k,
                "big_m": big_m, "pessimistic": opts, "start": start, "solver_cmd": solver_cmd,
            });
            io::write_exchange_file(&model, path)?;
            manifest.add_output(path);
            let mut out = model_summary(&model, path);
            let mut text = format!(
                "wrote {} ({} variables, {} binaries, {} constraints)\n",
                path.display(),
                model.variables().len(),
                model.n_binaries(),
                model.constraints().len()
            );
            if let Some(cmd) = solver_cmd {
                let solution = manifest::sibling(path, "sol.txt");
                run_solver(cmd, path, &solution)?;
                manifest.add_output(&solution);
                let values = io::read_solution(&solution)?;
                let cfg = EvalConfig::new(data.k, mode).with_tolerance(g.tol);
                let report = crosscheck(&ds, &values, None, &cfg)?;
                text.push_str(&format!(
                    "solver selection {}: claimed {} core {} match {}\n",
                    report.selection, report.mip_objective_claimed, report.core_objective, report.matches
                ));
                out["crosscheck"] = serde_json::to_value(&report)?;
            }
            Report { json: out, text }
        }
        Command::CheckSolution { data, solution, claimed } => {
            let ds = io::read_dataset(&data.dataset)?;
            manifest.add_input(&data.dataset)?;
            manifest.add_input(solution)?;
            let cfg = eval_config(data, g);
            manifest.config = json!({ "eval": cfg, "claimed": claimed });
            let values = io::read_solution(solution)?;
            let report = crosscheck(&ds, &values, *claimed, &cfg)?;
            Report {
                text: format!(
                    "selection {}: claimed {} core {} match {}\n",
                    report.selection, report.mip_objective_claimed, report.core_objective, report.matches
                ),
                json: serde_json::to_value(&report)?,
            }
        }
        Command::ReduceMc { instance, cover } => {
            let mc = io::read_max_coverage(instance)?;
            manifest.add_input(instance)?;
            manifest.config = serde_json::to_value(&mc)?;
            let r = reduce_max_coverage(&mc)?;
            let mut file = serde_json::to_value(io::dataset_to_json(&r.dataset))?;
            file["L"] = r.max_features.into();
            file["k"] = r.k.into();
            if let Some(cover) = cover {
                let c = parse_indices(cover)?;
                file["cover"] = json!(c);
                file["predicted_objective"] = predicted_objective(&mc, &c)?.into();
            }
            return emit_data_file(g, manifest, file, started);
        }
        Command::GenSynthetic { n, p, q } => {
            let ds = generate_synthetic_dataset(*n, *p, *q, seed(g))?;
            manifest.config = json!({ "n": n, "p": p, "q": q });
            let file = serde_json::to_value(io::dataset_to_json(&ds))?;
            return emit_data_file(g, manifest, file, started);
        }
        Command::Experiment {
            config,
            data_dir,
            source,
            target,
            invert_weights,
        } => {
            let mut cfg: ExperimentConfig = match config {
                Some(path) => {
                    manifest.add_input(path)?;
                    serde_json::from_str(&io::read_text(path)?)
                        .with_context(|| format!("invalid experiment config {}", path.display()))?
                }
                None => ExperimentConfig::default(),
            };
            if let Some(s) = g.seed {
                cfg.seed = s;
            }
            if let Some(dir) = data_dir {
                let (Some(source), Some(target)) = (source, target) else {
                    bail!("--data-dir needs --source and --target node ids");
                };
                cfg.data = DataSource::Directory {
                    path: dir.clone(),
                    source: *source,
                    target: *target,
                    invert_weights: *invert_weights,
                };
            }
            if let DataSource::Directory { path, .. } = &cfg.data {
                for f in ["nodes.csv", "edges.csv", "scenarios.csv"] {
                    manifest.add_input(&path.join(f))?;
                }
            }
            manifest.config = serde_json::to_value(&cfg)?;
            manifest.seeds = vec![cfg.seed];
            let (graph, scenarios) = experiment::load_data(&cfg)?;
            let result = experiment::run_experiment(&cfg, &graph, &scenarios, &par)?;
            let stem = g.output.clone().unwrap_or_else(|| PathBuf::from("experiment"));
            let stem = strip_extension(&stem, "csv");
            let files = experiment::write_outputs(&result, &stem, manifest)?;
            let mut text = String::from("L\tmethod\tmean_relative_length\tmean_objective\n");
            for s in &result.summary {
                text.push_str(&format!("{}\t{}\t{:.6}\t{:.6}\n", s.l, s.method, s.mean_relative_length, s.mean_objective));
            }
            let json = json!({
                "summary": result.summary,
                "negative_cycle_failures": result.negative_cycle_failures,
                "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
            });
            print_report(g, &Report { json, text })?;
            return Ok(());
        }
    };
    finish(g, manifest, report, started)
}

fn strip_extension(path: &Path, ext: &str) -> PathBuf {
    if path.extension().is_some_and(|e| e == ext) {
        path.with_extension("")
    } else {
        path.to_path_buf()
    }
}

fn model_summary(model: &MipModel, path: &Path) -> Value {
    json!({
        "model": path.display().to_string(),
        "formulation": model.metadata.formulation,
        "variables": model.variables().len(),
        "binaries": model.n_binaries(),
        "constraints": model.constraints().len(),
        "notes": model.metadata.notes,
    })
}

fn crosscheck(
    ds: &Dataset,
    values: &SolutionValues,
    claimed: Option<f64>,
    cfg: &EvalConfig,
) -> Result<fspeo_core::mip::CrosscheckReport> {
    let sel = selection_from_solution(values, ds.n_features())?;
    let claimed = claimed
        .or(values.objective)
        .context("no claimed objective: pass --claimed or add an 'objective' line")?;
    Ok(crosscheck_solution(ds, &sel, claimed, cfg)?)
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

fn run_solver(cmd: &str, model: &Path, solution: &Path) -> Result<()> {
    let line = cmd.replace("{model}", &shell_quote(model)).replace("{solution}", &shell_quote(solution));
    let status = Process::new("sh")
        .arg("-c")
        .arg(&line)
        .status()
        .with_context(|| format!("cannot start solver command '{line}'"))?;
    if !status.success() {
        bail!("solver command '{line}' failed with {status}");
    }
    Ok(())
}

fn print_report(g: &GlobalArgs, report: &Report) -> Result<()> {
    if g.json {
        println!("{}", serde_json::to_string_pretty(&report.json)?);
    } else {
        print!("{}", report.text);
    }
    Ok(())
}

/// Prints the report; with `--output` also writes it (plus manifest).
fn finish(g: &GlobalArgs, mut manifest: RunManifest, mut report: Report, started: Instant) -> Result<()> {
    if let Some(path) = &g.output {
        let mpath = manifest::manifest_path(path);
        if command_name_is_export(&manifest) {
            // the model file is the result; the report goes to stdout only
        } else {
            report.json["manifest"] = manifest::file_name(&mpath).into();
            io::write_json(path, &report.json)?;
            manifest.add_output(path);
        }
        manifest.timings.insert("total".into(), started.elapsed().as_secs_f64());
        manifest.write(&mpath)?;
    }
    print_report(g, &report)
}

fn command_name_is_export(m: &RunManifest) -> bool {
    m.command == "export-mip"
}

/// Dataset-shaped results: written to `--output` or printed as JSON.
fn emit_data_file(g: &GlobalArgs, mut manifest: RunManifest, mut file: Value, started: Instant) -> Result<()> {
    match &g.output {
        Some(path) => {
            let mpath = manifest::manifest_path(path);
            file["manifest"] = manifest::file_name(&mpath).into();
            io::write_json(path, &file)?;
            manifest.add_output(path);
            manifest.timings.insert("total".into(), started.elapsed().as_secs_f64());
            manifest.write(&mpath)?;
            let mut info = json!({ "dataset": path.display().to_string() });
            for key in ["L", "k", "cover", "predicted_objective"] {
                if let Some(v) = file.get(key) {
                    info[key] = v.clone();
                }
            }
            let text = info
                .as_object()
                .map(|o| o.iter().map(|(k, v)| format!("{k}: {v}\n")).collect())
                .unwrap_or_default();
            print_report(g, &Report { json: info, text })
        }
        None => {
            println!("{}", serde_json::to_string_pretty(&file)?);
            Ok(())
        }
    }
}
