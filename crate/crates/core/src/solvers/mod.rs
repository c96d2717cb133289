//! Selection search: exhaustive enumeration, the multi-start K-opt swap
//! heuristic and the random-selection baseline.

use alloc::vec::Vec;

use crate::selection::FeatureSelection;

mod baseline;
mod combinations;
mod exact;
mod kopt;

pub use baseline::{random_selection_baseline, random_selection_baseline_with, random_selections, BaselineStats};
pub use combinations::{binomial, Combinations};
pub use exact::{count_selections, exact_enumeration, exact_enumeration_with, DEFAULT_ENUMERATION_BUDGET};
pub use kopt::{k_opt_search, k_opt_search_with, swap_neighborhood, KOptConfig};

/// Number of candidates handed to a [`crate::BatchEvaluator`] at once.
pub(crate) const BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TracePoint {
    pub restart: usize,
    pub iteration: usize,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchResult {
    pub best_selection: FeatureSelection,
    pub best_objective: f64,
    pub trace: Vec<TracePoint>,
    /// Objective evaluations performed.
    pub evaluations: u64,
}
