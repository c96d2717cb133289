use alloc::vec::Vec;

use super::{binomial, Combinations, SearchResult, TracePoint, BATCH};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::eval::{BatchEvaluator, EvalConfig, Sequential};
use crate::selection::FeatureSelection;

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1_000_000;

/// `sum_{l=1..L} C(p, l)`.
pub fn count_selections(p: usize, max_len: usize) -> u128 {
    (1..=max_len.min(p)).fold(0u128, |acc, l| acc.saturating_add(binomial(p, l)))
}

/// Minimizes the objective over every selection with `1 <= |s| <= L`.
/// Ties go to the lexicographically smallest index vector.
pub fn exact_enumeration(ds: &Dataset, max_len: usize, cfg: &EvalConfig) -> Result<SearchResult> {
    exact_enumeration_with(ds, max_len, cfg, DEFAULT_ENUMERATION_BUDGET, &Sequential)
}

pub fn exact_enumeration_with<E: BatchEvaluator + ?Sized>(
    ds: &Dataset,
    max_len: usize,
    cfg: &EvalConfig,
    budget: u128,
    evaluator: &E,
) -> Result<SearchResult> {
    let p = ds.n_features();
    if max_len == 0 {
        return Err(Error::InvalidParameter("L must be at least 1".into()));
    }
    cfg.validate(ds.n_points())?;
    let required = count_selections(p, max_len);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut best: Option<(f64, FeatureSelection)> = None;
    let mut evaluations = 0u64;
    let mut batch: Vec<FeatureSelection> = Vec::with_capacity(BATCH);
    let mut flush = |batch: &mut Vec<FeatureSelection>, best: &mut Option<(f64, FeatureSelection)>| -> Result<()> {
        let values = evaluator.evaluate_batch(ds, cfg, batch)?;
        evaluations += batch.len() as u64;
        for (s, v) in batch.drain(..).zip(values) {
            let better = match best {
                None => true,
                Some((bv, bs)) => v < *bv || (v == *bv && s < *bs),
            };
            if better {
                *best = Some((v, s));
            }
        }
        Ok(())
    };
    for l in 1..=max_len.min(p) {
        for combo in Combinations::new(p, l) {
            batch.push(FeatureSelection::new(combo)?);
            if batch.len() == BATCH {
                flush(&mut batch, &mut best)?;
            }
        }
    }
    flush(&mut batch, &mut best)?;
    let (best_objective, best_selection) = best.expect("at least one selection when p >= 1");
    Ok(SearchResult {
        trace: alloc::vec![TracePoint {
            restart: 0,
            iteration: 0,
            objective: best_objective,
        }],
        best_selection,
        best_objective,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_objective, TieMode};
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn toy_pessimistic_picks_upper() {
        let ds = fixtures::toy_example();
        let r = exact_enumeration(&ds, 1, &EvalConfig::new(1, TieMode::Pessimistic)).unwrap();
        assert_eq!(r.best_selection.as_slice(), &[0]);
        assert_eq!(r.best_objective, 2.0);
        assert_eq!(r.evaluations, 2);
    }

    #[test]
    fn toy_optimistic_tie_goes_lexicographic() {
        let ds = fixtures::toy_example();
        let r = exact_enumeration(&ds, 1, &EvalConfig::new(1, TieMode::Optimistic)).unwrap();
        assert_eq!(r.best_selection.as_slice(), &[0]);
        assert_eq!(r.best_objective, 2.0);
    }

    #[test]
    fn knapsack_optimum_matches_informative_pair() {
        let ds = fixtures::knapsack_example();
        let cfg = EvalConfig::new(1, TieMode::Pessimistic);
        let r = exact_enumeration(&ds, 2, &cfg).unwrap();
        let pair = evaluate_objective(&ds, &FeatureSelection::new(vec![2, 4]).unwrap(), &cfg).unwrap();
        assert_eq!(r.best_objective, pair);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn budget_guard() {
        let ds = fixtures::knapsack_example();
        let cfg = EvalConfig::new(1, TieMode::Pessimistic);
        assert_eq!(
            exact_enumeration_with(&ds, 2, &cfg, 14, &Sequential),
            Err(Error::BudgetExceeded { required: 15, budget: 14 })
        );
        assert_eq!(count_selections(5, 2), 15);
        assert_eq!(count_selections(5, 9), 31);
    }
}
