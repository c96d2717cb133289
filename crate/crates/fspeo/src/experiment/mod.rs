//! Shortest-path experiment: select grid features on historic scenarios and
//! measure how far the most explainable path for held-out scenarios is from
//! the optimum, against random and all-edge baselines.

mod config;
mod run;
mod synthetic;

pub use config::{DataSource, ExperimentConfig, SyntheticNetwork};
pub use run::{load_data, run_experiment, write_outputs, ExperimentResult, ExperimentRow, SummaryRow};
pub use synthetic::generate_road_network;
