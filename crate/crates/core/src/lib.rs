//! Instance feature selection for data-driven explainable optimization.
//!
//! Given historic instance/solution pairs, pick a small set of instance
//! features such that instances that are close under the selected features
//! also have close solutions. The crate is `no_std` (it needs `alloc`) and
//! contains only the algorithmic parts:
//!
//! - [`dataset`], [`eval`]: the data model and the optimistic/pessimistic
//!   k-nearest-neighbor objective,
//! - [`solvers`]: exact enumeration, the multi-start K-opt swap heuristic and
//!   the random-selection baseline,
//! - [`mip`]: solver-agnostic MIP models for both objective variants and an
//!   LP-format writer,
//! - [`hardness`]: the Maximum Coverage reduction used as a correctness oracle,
//! - [`pathlab`]: shortest-path data, grid features and most-explainable paths.
//!
//! File formats, the CLI and the experiment harness live in the `fspeo` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod hardness;
pub mod mip;
pub mod pathlab;
pub mod selection;
pub mod solvers;
pub mod synthetic;

mod rng;

pub use rng::derive_seed;

pub use dataset::{solution_distance_matrix, ColumnValues, Dataset, FeatureColumn, FeatureKind};
pub use error::{Error, Result};
pub use eval::{
    classify_neighbors, evaluate_objective, evaluate_selection, BatchEvaluator, EvalConfig,
    EvalResult, NeighborClassification, PointEval, Sequential, TieMode,
};
pub use selection::FeatureSelection;
