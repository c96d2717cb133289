//! The k-nearest-neighbor objective of a feature selection.
//!
//! For every data point `i` the `k` nearest other points under the selected
//! features are its neighbors, and the objective sums the solution distances
//! `d_X(i, j)` to them. Points tied with the `k`-th distance (within an
//! absolute tolerance) are *borderline*; the optimistic mode fills the
//! remaining slots with the borderline points of smallest solution distance,
//! the pessimistic mode with those of largest. Remaining ties are broken by
//! the smaller point index.

use alloc::vec::Vec;

use crate::dataset::{pair_index, Dataset};
use crate::error::{Error, Result};
use crate::selection::FeatureSelection;

pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TieMode {
    Optimistic,
    Pessimistic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalConfig {
    pub k: usize,
    pub mode: TieMode,
    /// Absolute tolerance `tau`: `d` is borderline iff `|d - eps| <= tau`,
    /// strict iff `d < eps - tau`.
    pub tie_tolerance: f64,
}

impl EvalConfig {
    pub fn new(k: usize, mode: TieMode) -> Self {
        Self {
            k,
            mode,
            tie_tolerance: DEFAULT_TIE_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tie_tolerance: f64) -> Self {
        self.tie_tolerance = tie_tolerance;
        self
    }

    pub fn validate(&self, n_points: usize) -> Result<()> {
        if self.k == 0 || self.k + 1 > n_points {
            return Err(Error::InvalidK {
                k: self.k,
                n: n_points,
            });
        }
        if !(self.tie_tolerance >= 0.0 && self.tie_tolerance.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "tie tolerance must be a nonnegative number, got {}",
                self.tie_tolerance
            )));
        }
        Ok(())
    }
}

/// Strict and borderline neighbors of one point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NeighborClassification {
    pub point: usize,
    /// The `k`-th smallest instance distance from `point`.
    pub epsilon: f64,
    pub strict: Vec<usize>,
    pub borderline: Vec<usize>,
    /// Slots left for borderline points: `k - |strict|`.
    pub k_bar: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointEval {
    pub contribution: f64,
    /// Exactly `k` indices, ascending.
    pub neighbors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalResult {
    pub objective: f64,
    pub per_point: Vec<PointEval>,
}

#[derive(Default)]
struct Scratch {
    condensed: Vec<f64>,
    row: Vec<(f64, usize)>,
    dists: Vec<f64>,
    border: Vec<(f64, usize)>,
    chosen: Vec<usize>,
}

impl Scratch {
    fn fill_row(&mut self, n: usize, i: usize) {
        self.row.clear();
        for j in (0..n).filter(|&j| j != i) {
            self.row.push((self.condensed[pair_index(n, i, j)], j));
        }
    }

    fn threshold(&mut self, k: usize) -> f64 {
        self.dists.clear();
        self.dists.extend(self.row.iter().map(|&(d, _)| d));
        let (_, kth, _) = self.dists.select_nth_unstable_by(k - 1, f64::total_cmp);
        *kth
    }

    /// Fills `chosen` with the neighbor set of point `i` (ascending) and
    /// returns its contribution. Expects `fill_row` to have run for `i`.
    fn point_contribution(&mut self, ds: &Dataset, i: usize, cfg: &EvalConfig) -> f64 {
        let eps = self.threshold(cfg.k);
        let tau = cfg.tie_tolerance;
        let dx = ds.solution_distance_row(i);
        self.chosen.clear();
        self.border.clear();
        for &(d, j) in &self.row {
            if d < eps - tau {
                self.chosen.push(j);
            } else if (d - eps).abs() <= tau {
                self.border.push((dx[j], j));
            }
        }
        let k_bar = cfg.k - self.chosen.len();
        match cfg.mode {
            TieMode::Optimistic => self
                .border
                .sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))),
            TieMode::Pessimistic => self
                .border
                .sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))),
        }
        self.chosen.extend(self.border[..k_bar].iter().map(|&(_, j)| j));
        self.chosen.sort_unstable();
        self.chosen.iter().map(|&j| dx[j]).sum()
    }
}

fn prepare(ds: &Dataset, selection: &FeatureSelection, cfg: &EvalConfig) -> Result<Scratch> {
    ds.check_selection(selection)?;
    cfg.validate(ds.n_points())?;
    let mut scratch = Scratch::default();
    ds.condensed_distances(selection.as_slice(), &mut scratch.condensed);
    Ok(scratch)
}

/// Strict/borderline split of point `i` under `selection`.
pub fn classify_neighbors(
    ds: &Dataset,
    i: usize,
    selection: &FeatureSelection,
    cfg: &EvalConfig,
) -> Result<NeighborClassification> {
    let n = ds.n_points();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let mut s = prepare(ds, selection, cfg)?;
    s.fill_row(n, i);
    let eps = s.threshold(cfg.k);
    let tau = cfg.tie_tolerance;
    let strict: Vec<usize> = s.row.iter().filter(|r| r.0 < eps - tau).map(|r| r.1).collect();
    let borderline: Vec<usize> = s
        .row
        .iter()
        .filter(|r| (r.0 - eps).abs() <= tau)
        .map(|r| r.1)
        .collect();
    Ok(NeighborClassification {
        point: i,
        epsilon: eps,
        k_bar: cfg.k - strict.len(),
        strict,
        borderline,
    })
}

/// Full evaluation with per-point neighbor sets.
pub fn evaluate_selection(
    ds: &Dataset,
    selection: &FeatureSelection,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let n = ds.n_points();
    let mut s = prepare(ds, selection, cfg)?;
    let mut per_point = Vec::with_capacity(n);
    for i in 0..n {
        s.fill_row(n, i);
        let contribution = s.point_contribution(ds, i, cfg);
        per_point.push(PointEval {
            contribution,
            neighbors: s.chosen.clone(),
        });
    }
    let objective = per_point.iter().map(|p| p.contribution).sum();
    Ok(EvalResult {
        objective,
        per_point,
    })
}

/// Objective value only; same arithmetic as [`evaluate_selection`].
pub fn evaluate_objective(ds: &Dataset, selection: &FeatureSelection, cfg: &EvalConfig) -> Result<f64> {
    let n = ds.n_points();
    let mut s = prepare(ds, selection, cfg)?;
    let mut total = 0.0;
    for i in 0..n {
        s.fill_row(n, i);
        total += s.point_contribution(ds, i, cfg);
    }
    Ok(total)
}

/// Evaluates many selections against one dataset. Implementations must
/// return values in input order; the searches rely on that for determinism.
pub trait BatchEvaluator {
    fn evaluate_batch(
        &self,
        ds: &Dataset,
        cfg: &EvalConfig,
        selections: &[FeatureSelection],
    ) -> Result<Vec<f64>>;
}

/// Evaluates one selection after the other on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl BatchEvaluator for Sequential {
    fn evaluate_batch(
        &self,
        ds: &Dataset,
        cfg: &EvalConfig,
        selections: &[FeatureSelection],
    ) -> Result<Vec<f64>> {
        selections.iter().map(|s| evaluate_objective(ds, s, cfg)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;

    fn sel(ds: &Dataset, name: &str) -> FeatureSelection {
        FeatureSelection::new(vec![ds.feature_index(name).unwrap()]).unwrap()
    }

    #[test]
    fn toy_table() {
        let ds = fixtures::toy_example();
        let opt = EvalConfig::new(1, TieMode::Optimistic);
        let pes = EvalConfig::new(1, TieMode::Pessimistic);
        let up = sel(&ds, "upper");
        let low = sel(&ds, "lower");
        assert_eq!(evaluate_objective(&ds, &up, &opt).unwrap(), 2.0);
        assert_eq!(evaluate_objective(&ds, &up, &pes).unwrap(), 2.0);
        assert_eq!(evaluate_objective(&ds, &low, &opt).unwrap(), 2.0);
        assert_eq!(evaluate_objective(&ds, &low, &pes).unwrap(), 3.0);
        let r = evaluate_selection(&ds, &low, &pes).unwrap();
        let contributions: Vec<f64> = r.per_point.iter().map(|p| p.contribution).collect();
        assert_eq!(contributions, vec![1.0, 1.0, 1.0]);
        assert_eq!(r.per_point[1].neighbors, vec![0]);
        let r = evaluate_selection(&ds, &low, &opt).unwrap();
        assert_eq!(r.per_point[1].neighbors, vec![2]);
    }

    #[test]
    fn toy_borderline_classification() {
        let ds = fixtures::toy_example();
        let c = classify_neighbors(&ds, 1, &sel(&ds, "lower"), &EvalConfig::new(1, TieMode::Pessimistic))
            .unwrap();
        assert!((c.epsilon - 0.1).abs() < 1e-12);
        assert!(c.strict.is_empty());
        assert_eq!(c.borderline, vec![0, 2]);
        assert_eq!(c.k_bar, 1);
    }

    #[test]
    fn constant_feature_makes_everything_borderline() {
        let base = fixtures::knapsack_example();
        let mut cols = base.features().to_vec();
        cols.push(crate::FeatureColumn::numeric("zero", vec![0.0; 4]));
        let ds = Dataset::new(cols, base.solution_distance_rows()).unwrap();
        let s = FeatureSelection::new(vec![5]).unwrap();
        let c = classify_neighbors(&ds, 2, &s, &EvalConfig::new(2, TieMode::Optimistic)).unwrap();
        assert_eq!(c.epsilon, 0.0);
        assert!(c.strict.is_empty());
        assert_eq!(c.borderline, vec![0, 1, 3]);
    }

    #[test]
    fn distinct_distances_k2() {
        let ds = fixtures::knapsack_example();
        // group_ratio from point 0: 0.03 (1), 0.46 (2), 0.29 (3)
        let s = FeatureSelection::new(vec![4]).unwrap();
        let c = classify_neighbors(&ds, 0, &s, &EvalConfig::new(2, TieMode::Optimistic)).unwrap();
        assert_eq!(c.strict, vec![1]);
        assert_eq!(c.borderline, vec![3]);
        assert_eq!(c.k_bar, 1);
    }

    #[test]
    fn knapsack_pairing_and_objective() {
        let ds = fixtures::knapsack_example();
        let s = FeatureSelection::new(vec![2, 4]).unwrap();
        let r = evaluate_selection(&ds, &s, &EvalConfig::new(1, TieMode::Pessimistic)).unwrap();
        let nbrs: Vec<usize> = r.per_point.iter().map(|p| p.neighbors[0]).collect();
        assert_eq!(nbrs, vec![1, 0, 3, 2]);
        let expected = 2.0 * ds.solution_distance(0, 1) + 2.0 * ds.solution_distance(2, 3);
        assert!((r.objective - expected).abs() < 1e-12);
        assert!((r.objective - 0.14).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_k_and_selection() {
        let ds = fixtures::toy_example();
        let s = sel(&ds, "upper");
        assert_eq!(
            evaluate_objective(&ds, &s, &EvalConfig::new(3, TieMode::Optimistic)),
            Err(Error::InvalidK { k: 3, n: 3 })
        );
        assert!(evaluate_objective(&ds, &s, &EvalConfig::new(0, TieMode::Optimistic)).is_err());
        let bad = FeatureSelection::new(vec![7]).unwrap();
        assert!(evaluate_objective(&ds, &bad, &EvalConfig::new(1, TieMode::Optimistic)).is_err());
        let neg = EvalConfig::new(1, TieMode::Optimistic).with_tolerance(-1.0);
        assert!(evaluate_objective(&ds, &s, &neg).is_err());
    }

    #[test]
    fn sequential_batch_matches_single() {
        let ds = fixtures::knapsack_example();
        let cfg = EvalConfig::new(2, TieMode::Pessimistic);
        let sels: Vec<FeatureSelection> = (0..5)
            .map(|f| FeatureSelection::new(vec![f]).unwrap())
            .collect();
        let batch = Sequential.evaluate_batch(&ds, &cfg, &sels).unwrap();
        for (s, v) in sels.iter().zip(batch) {
            assert_eq!(evaluate_objective(&ds, s, &cfg).unwrap(), v);
        }
    }
}
