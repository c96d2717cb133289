//! Multi-start K-opt swap search.
//!
//! Each restart draws `start_candidates` random selections of size exactly
//! `L` and starts from the best one. An outer iteration samples up to
//! `max_sampled_moves` distinct swaps (K selected features out, K unselected
//! in) around the selection the iteration started from, evaluates them in
//! sampled order and takes every candidate that beats the incumbent on the
//! spot. The iteration ends early after `improving_moves_cutoff`
//! improvements; a restart ends after an iteration without improvement.
//!
//! Restart `r` draws from its own stream seeded with
//! `derive_seed(seed, r)`. Candidates are evaluated in fixed-size batches
//! and accepted in sampled order, so the result does not depend on how a
//! [`BatchEvaluator`] schedules work.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};

use super::{binomial, Combinations, SearchResult, TracePoint, BATCH};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::eval::{BatchEvaluator, EvalConfig, Sequential};
use crate::rng::{self, derive_seed, Rng};
use crate::selection::FeatureSelection;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct KOptConfig {
    /// Features exchanged per move (K).
    pub swap_size: usize,
    pub max_sampled_moves: usize,
    /// `usize::MAX` disables the early exit.
    pub improving_moves_cutoff: usize,
    pub start_candidates: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Selection size L.
    pub max_features: usize,
}

impl Default for KOptConfig {
    fn default() -> Self {
        Self {
            swap_size: 1,
            max_sampled_moves: 1000,
            improving_moves_cutoff: 10,
            start_candidates: 10,
            restarts: 5,
            seed: 0,
            max_features: 1,
        }
    }
}

impl KOptConfig {
    pub fn new(max_features: usize, seed: u64) -> Self {
        Self {
            max_features,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        let counters = [
            ("swap_size", self.swap_size),
            ("max_sampled_moves", self.max_sampled_moves),
            ("improving_moves_cutoff", self.improving_moves_cutoff),
            ("start_candidates", self.start_candidates),
            ("restarts", self.restarts),
            ("L", self.max_features),
        ];
        if let Some((name, _)) = counters.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
        }
        if self.max_features > p {
            return Err(Error::InvalidParameter(format!(
                "L={} exceeds the number of features p={p}",
                self.max_features
            )));
        }
        let limit = self.max_features.min(p - self.max_features);
        if self.swap_size > limit {
            return Err(Error::InvalidParameter(format!(
                "swap size K={} must be at most min(L, p-L) = {limit}",
                self.swap_size
            )));
        }
        Ok(())
    }

    /// `C(L, K) * C(p - L, K)`.
    pub fn neighborhood_size(&self, p: usize) -> u128 {
        binomial(self.max_features, self.swap_size)
            .saturating_mul(binomial(p - self.max_features, self.swap_size))
    }
}

/// A swap: positions into the selected list leaving, positions into the
/// unselected list entering.
type Move = (Vec<usize>, Vec<usize>);

fn apply(selected: &[usize], unselected: &[usize], mv: &Move) -> FeatureSelection {
    let mut out: Vec<usize> = selected
        .iter()
        .enumerate()
        .filter(|(pos, _)| !mv.0.contains(pos))
        .map(|(_, &f)| f)
        .collect();
    out.extend(mv.1.iter().map(|&pos| unselected[pos]));
    FeatureSelection::new(out).expect("swap keeps |s| >= 1")
}

fn complement(selection: &FeatureSelection, p: usize) -> Vec<usize> {
    (0..p).filter(|&f| !selection.contains(f)).collect()
}

/// Every selection reachable from `selection` by one K-swap, in
/// lexicographic move order.
pub fn swap_neighborhood(selection: &FeatureSelection, p: usize, k: usize) -> Vec<FeatureSelection> {
    let selected = selection.as_slice();
    let unselected = complement(selection, p);
    let mut out = Vec::new();
    for leave in Combinations::new(selected.len(), k) {
        for enter in Combinations::new(unselected.len(), k) {
            out.push(apply(selected, &unselected, &(leave.clone(), enter)));
        }
    }
    out
}

fn sorted_sample(rng: &mut Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

/// Distinct moves in sampled order: the whole neighborhood shuffled when it
/// fits into `limit`, otherwise `limit` moves drawn without replacement.
fn sample_moves(rng: &mut Rng, l: usize, free: usize, k: usize, limit: usize) -> Vec<Move> {
    let space = binomial(l, k).saturating_mul(binomial(free, k));
    if space <= limit as u128 {
        let mut all: Vec<Move> = Vec::with_capacity(space as usize);
        for leave in Combinations::new(l, k) {
            for enter in Combinations::new(free, k) {
                all.push((leave.clone(), enter));
            }
        }
        all.shuffle(rng);
        return all;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(limit);
    while out.len() < limit {
        let mv = (sorted_sample(rng, l, k), sorted_sample(rng, free, k));
        if seen.insert(mv.clone()) {
            out.push(mv);
        }
    }
    out
}

/// Single-threaded [`k_opt_search_with`].
pub fn k_opt_search(ds: &Dataset, cfg: &KOptConfig, eval: &EvalConfig) -> Result<SearchResult> {
    k_opt_search_with(ds, cfg, eval, &Sequential)
}

pub fn k_opt_search_with<E: BatchEvaluator + ?Sized>(
    ds: &Dataset,
    cfg: &KOptConfig,
    eval: &EvalConfig,
    evaluator: &E,
) -> Result<SearchResult> {
    let p = ds.n_features();
    cfg.validate(p)?;
    eval.validate(ds.n_points())?;
    let l = cfg.max_features;
    let mut trace = Vec::new();
    let mut evaluations = 0u64;
    let mut best: Option<(f64, FeatureSelection)> = None;

    for restart in 0..cfg.restarts {
        let mut rng = rng::seeded(derive_seed(cfg.seed, restart as u64));
        let starts: Vec<FeatureSelection> = (0..cfg.start_candidates)
            .map(|_| FeatureSelection::new(sorted_sample(&mut rng, p, l)))
            .collect::<Result<_>>()?;
        let values = evaluator.evaluate_batch(ds, eval, &starts)?;
        evaluations += starts.len() as u64;
        let (mut current_value, mut current) = starts
            .into_iter()
            .zip(values)
            .fold(None::<(f64, FeatureSelection)>, |acc, (s, v)| match acc {
                Some((bv, _)) if bv <= v => acc,
                _ => Some((v, s)),
            })
            .expect("start_candidates >= 1");
        trace.push(TracePoint {
            restart,
            iteration: 0,
            objective: current_value,
        });

        let mut iteration = 0;
        loop {
            iteration += 1;
            let base = current.clone();
            let selected = base.as_slice().to_vec();
            let unselected = complement(&base, p);
            let moves = sample_moves(&mut rng, l, unselected.len(), cfg.swap_size, cfg.max_sampled_moves);
            let mut improvements = 0usize;
            'pass: for chunk in moves.chunks(BATCH) {
                let candidates: Vec<FeatureSelection> =
                    chunk.iter().map(|mv| apply(&selected, &unselected, mv)).collect();
                let values = evaluator.evaluate_batch(ds, eval, &candidates)?;
                evaluations += candidates.len() as u64;
                for (cand, value) in candidates.into_iter().zip(values) {
                    if value < current_value {
                        current_value = value;
                        current = cand;
                        improvements += 1;
                        if improvements >= cfg.improving_moves_cutoff {
                            break 'pass;
                        }
                    }
                }
            }
            if improvements == 0 {
                break;
            }
            trace.push(TracePoint {
                restart,
                iteration,
                objective: current_value,
            });
        }

        let better = match &best {
            None => true,
            Some((bv, _)) => current_value < *bv,
        };
        if better {
            best = Some((current_value, current));
        }
    }

    let (best_objective, best_selection) = best.expect("restarts >= 1");
    Ok(SearchResult {
        best_selection,
        best_objective,
        trace,
        evaluations,
    })
}
