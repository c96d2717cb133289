use alloc::vec::Vec;

use rand::seq::index;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::eval::{BatchEvaluator, EvalConfig, Sequential};
use crate::rng;
use crate::selection::FeatureSelection;

/// Objective statistics over random size-`L` selections.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaselineStats {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub selections: Vec<FeatureSelection>,
    pub objectives: Vec<f64>,
}

/// `repeats` uniform size-`L` subsets of `0..p`, drawn independently.
pub fn random_selections(p: usize, max_len: usize, repeats: usize, seed: u64) -> Result<Vec<FeatureSelection>> {
    if max_len == 0 || max_len > p {
        return Err(Error::InvalidParameter(alloc::format!(
            "L={max_len} must be between 1 and p={p}"
        )));
    }
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let mut rng = rng::seeded(seed);
    (0..repeats)
        .map(|_| FeatureSelection::new(index::sample(&mut rng, p, max_len).into_vec()))
        .collect()
}

pub fn random_selection_baseline(
    ds: &Dataset,
    max_len: usize,
    repeats: usize,
    cfg: &EvalConfig,
    seed: u64,
) -> Result<BaselineStats> {
    random_selection_baseline_with(ds, max_len, repeats, cfg, seed, &Sequential)
}

pub fn random_selection_baseline_with<E: BatchEvaluator + ?Sized>(
    ds: &Dataset,
    max_len: usize,
    repeats: usize,
    cfg: &EvalConfig,
    seed: u64,
    evaluator: &E,
) -> Result<BaselineStats> {
    let selections = random_selections(ds.n_features(), max_len, repeats, seed)?;
    let objectives = evaluator.evaluate_batch(ds, cfg, &selections)?;
    let n = objectives.len() as f64;
    let min = objectives.iter().copied().fold(f64::INFINITY, f64::min);
    let max = objectives.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mean, std) = if min == max {
        (min, 0.0)
    } else {
        let mean = objectives.iter().sum::<f64>() / n;
        let var = objectives.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        (mean, libm::sqrt(var))
    };
    Ok(BaselineStats {
        mean,
        std,
        min,
        max,
        selections,
        objectives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_objective, TieMode};
    use crate::solvers::exact_enumeration;
    use crate::synthetic::generate_synthetic_dataset;

    #[test]
    fn single_draw_equals_direct_evaluation() {
        let ds = generate_synthetic_dataset(12, 6, 2, 3).unwrap();
        let cfg = EvalConfig::new(2, TieMode::Pessimistic);
        let st = random_selection_baseline(&ds, 3, 1, &cfg, 17).unwrap();
        let direct = evaluate_objective(&ds, &st.selections[0], &cfg).unwrap();
        assert_eq!(st.mean, direct);
        assert_eq!((st.min, st.max, st.std), (direct, direct, 0.0));
    }

    #[test]
    fn bounded_below_by_optimum() {
        let ds = generate_synthetic_dataset(12, 6, 2, 4).unwrap();
        let cfg = EvalConfig::new(2, TieMode::Optimistic);
        let st = random_selection_baseline(&ds, 2, 40, &cfg, 1).unwrap();
        let opt = exact_enumeration(&ds, 2, &cfg).unwrap();
        assert!(st.min >= opt.best_objective);
        assert!(st.min <= st.mean && st.mean <= st.max);
    }

    #[test]
    fn full_selection_has_no_variance() {
        let ds = generate_synthetic_dataset(10, 4, 2, 8).unwrap();
        let cfg = EvalConfig::new(3, TieMode::Pessimistic);
        let st = random_selection_baseline(&ds, 4, 25, &cfg, 2).unwrap();
        assert_eq!(st.std, 0.0);
        assert_eq!(st.min, st.max);
    }

    #[test]
    fn rejects_oversized_l() {
        let ds = generate_synthetic_dataset(10, 4, 2, 8).unwrap();
        let cfg = EvalConfig::new(3, TieMode::Pessimistic);
        assert!(random_selection_baseline(&ds, 5, 3, &cfg, 2).is_err());
        assert!(random_selection_baseline(&ds, 2, 0, &cfg, 2).is_err());
    }
}
