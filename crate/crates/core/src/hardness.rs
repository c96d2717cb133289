//! Reduction from Maximum Coverage to the feature selection problem.
//!
//! Given `|U| = u` elements, subsets `T_0..T_{m-1}` and budget `K`, the
//! reduced dataset has `(u + 2)(u + 1)` points and one instance feature per
//! subset. Points, in index order:
//!
//! | role | count | instance features | solution features (dim `u + 2`) |
//! |------|-------|-------------------|---------------------------------|
//! | center `I_c` | 1 | `0` | `0` |
//! | plain `I_i`, `i < u + 1` | `u + 1` | `1/(2K)` everywhere | `e_i + e_last` |
//! | bar `Ī_i`, `i < u` | `u` | `[i in T_f]` | `e_i + 3 e_last` |
//! | copy `Ī_i^l`, `l < u + 1` | `u(u + 1)` | `[i in T_f] + 1/(3K)` | `2 e_last` |
//!
//! With `L = K` and `k = u`, a cover `C` of `|C| <= K` subsets leaving `g`
//! elements uncovered has objective `4g + 2k + 2(k + 1)k + 2k^2` under both
//! tie rules. Feature values are kept as integer multiples of `1/(6K)`
//! until they are converted for the dataset.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{solution_distance_matrix, Dataset, FeatureColumn};
use crate::error::{Error, Result};
use crate::solvers::Combinations;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaxCoverageInstance {
    pub universe_size: usize,
    /// Element indices in `0..universe_size`.
    pub subsets: Vec<Vec<usize>>,
    /// Cardinality budget `K`.
    #[cfg_attr(feature = "serde", serde(rename = "K"))]
    pub budget: usize,
    /// Coverage target `W`.
    #[cfg_attr(feature = "serde", serde(rename = "W"))]
    pub target: usize,
}

impl MaxCoverageInstance {
    /// Sorts and deduplicates every subset, then checks the instance.
    pub fn new(universe_size: usize, subsets: Vec<Vec<usize>>, budget: usize, target: usize) -> Result<Self> {
        let mut mc = Self {
            universe_size,
            subsets,
            budget,
            target,
        };
        mc.normalize();
        mc.validate()?;
        Ok(mc)
    }

    pub fn normalize(&mut self) {
        for s in &mut self.subsets {
            s.sort_unstable();
            s.dedup();
        }
    }

    /// Expects normalized subsets.
    pub fn validate(&self) -> Result<()> {
        if self.universe_size == 0 {
            return Err(Error::InvalidCoverage("universe must not be empty".into()));
        }
        if self.subsets.is_empty() {
            return Err(Error::InvalidCoverage("at least one subset is required".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidCoverage("budget K must be at least 1".into()));
        }
        if let Some(e) = self.subsets.iter().flatten().find(|&&e| e >= self.universe_size) {
            return Err(Error::InvalidCoverage(format!(
                "element {e} outside the universe 0..{}",
                self.universe_size
            )));
        }
        let mut seen = BTreeSet::new();
        for (j, s) in self.subsets.iter().enumerate() {
            if !seen.insert(s) {
                return Err(Error::InvalidCoverage(format!("subset {j} duplicates an earlier subset")));
            }
        }
        Ok(())
    }

    /// Number of elements covered by the union of the chosen subsets.
    pub fn covered(&self, cover: &[usize]) -> Result<usize> {
        self.check_cover(cover)?;
        let union: BTreeSet<usize> = cover.iter().flat_map(|&j| self.subsets[j].iter().copied()).collect();
        Ok(union.len())
    }

    fn check_cover(&self, cover: &[usize]) -> Result<()> {
        let distinct: BTreeSet<usize> = cover.iter().copied().collect();
        if distinct.is_empty() || distinct.len() != cover.len() || distinct.len() > self.budget {
            return Err(Error::InvalidCoverage(format!(
                "a cover needs 1..={} distinct subsets, got {cover:?}",
                self.budget
            )));
        }
        if let Some(&j) = distinct.iter().find(|&&j| j >= self.subsets.len()) {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.subsets.len(),
            });
        }
        Ok(())
    }

    /// Best cover with `1 <= |C| <= K` by enumeration (ties: first in
    /// size-then-lexicographic order) and its coverage.
    pub fn solve_exhaustive(&self) -> Result<(Vec<usize>, usize)> {
        self.validate()?;
        let m = self.subsets.len();
        let mut best: Option<(Vec<usize>, usize)> = None;
        for size in 1..=self.budget.min(m) {
            for cover in Combinations::new(m, size) {
                let c = self.covered(&cover)?;
                if best.as_ref().is_none_or(|b| c > b.1) {
                    best = Some((cover, c));
                }
            }
        }
        Ok(best.expect("m >= 1 and K >= 1"))
    }
}

/// Role of a point in the reduced dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointRole {
    Center,
    Plain(usize),
    Bar(usize),
    BarCopy(usize, usize),
}

/// Point roles in dataset index order for a universe of size `u`.
pub fn reduction_layout(u: usize) -> Vec<PointRole> {
    let mut out = vec![PointRole::Center];
    out.extend((0..=u).map(PointRole::Plain));
    out.extend((0..u).map(PointRole::Bar));
    for i in 0..u {
        out.extend((0..=u).map(|l| PointRole::BarCopy(i, l)));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub dataset: Dataset,
    /// `L = K`.
    pub max_features: usize,
    /// `k = |U|`.
    pub k: usize,
}

pub fn reduce_max_coverage(mc: &MaxCoverageInstance) -> Result<Reduction> {
    let mut mc = mc.clone();
    mc.normalize();
    mc.validate()?;
    let u = mc.universe_size;
    let m = mc.subsets.len();
    let unit = 6 * mc.budget as i64; // feature values are multiples of 1/unit
    let half = 3; // 1/(2K)
    let third = 2; // 1/(3K)
    let layout = reduction_layout(u);
    let contains = |i: usize, f: usize| mc.subsets[f].binary_search(&i).is_ok();

    let features = (0..m)
        .map(|f| {
            let values = layout
                .iter()
                .map(|role| {
                    let num = match *role {
                        PointRole::Center => 0,
                        PointRole::Plain(_) => half,
                        PointRole::Bar(i) => unit * contains(i, f) as i64,
                        PointRole::BarCopy(i, _) => unit * contains(i, f) as i64 + third,
                    };
                    num as f64 / unit as f64
                })
                .collect();
            FeatureColumn::numeric(format!("T{f}"), values)
        })
        .collect();

    let dim = u + 2;
    let last = u + 1;
    let solutions: Vec<Vec<f64>> = layout
        .iter()
        .map(|role| {
            let mut x = vec![0.0; dim];
            match *role {
                PointRole::Center => {}
                PointRole::Plain(i) => {
                    x[i] = 1.0;
                    x[last] += 1.0;
                }
                PointRole::Bar(i) => {
                    x[i] = 1.0;
                    x[last] = 3.0;
                }
                PointRole::BarCopy(..) => x[last] = 2.0,
            }
            x
        })
        .collect();
    let dataset = Dataset::new(features, solution_distance_matrix(&solutions))?;
    Ok(Reduction {
        dataset,
        max_features: mc.budget,
        k: u,
    })
}

/// Objective of the selection `C` on the reduced dataset:
/// `4g + 2k + 2(k + 1)k + 2k^2` with `k = |U|` and `g` uncovered elements.
pub fn predicted_objective(mc: &MaxCoverageInstance, cover: &[usize]) -> Result<f64> {
    let gamma = (mc.universe_size - mc.covered(cover)?) as f64;
    let k = mc.universe_size as f64;
    Ok(4.0 * gamma + 2.0 * k + 2.0 * (k + 1.0) * k + 2.0 * k * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_objective, EvalConfig, TieMode};
    use crate::selection::FeatureSelection;

    fn example() -> MaxCoverageInstance {
        MaxCoverageInstance::new(3, vec![vec![2, 0, 1], vec![0]], 1, 3).unwrap()
    }

    #[test]
    fn sizes() {
        let mc = MaxCoverageInstance::new(2, vec![vec![0], vec![1], vec![0, 1]], 2, 2).unwrap();
        let r = reduce_max_coverage(&mc).unwrap();
        assert_eq!(r.dataset.n_points(), 12);
        assert_eq!(r.dataset.n_features(), 3);
        assert_eq!((r.max_features, r.k), (2, 2));
        assert_eq!(reduction_layout(2).len(), 12);
    }

    #[test]
    fn full_cover_example() {
        let mc = example();
        assert_eq!(predicted_objective(&mc, &[0]).unwrap(), 48.0);
        assert_eq!(predicted_objective(&mc, &[1]).unwrap(), 48.0 + 8.0);
        let r = reduce_max_coverage(&mc).unwrap();
        for mode in [TieMode::Pessimistic, TieMode::Optimistic] {
            let cfg = EvalConfig::new(r.k, mode);
            let full = evaluate_objective(&r.dataset, &FeatureSelection::new(vec![0]).unwrap(), &cfg).unwrap();
            assert_eq!(full, 48.0);
            let part = evaluate_objective(&r.dataset, &FeatureSelection::new(vec![1]).unwrap(), &cfg).unwrap();
            assert_eq!(part, 56.0);
        }
    }

    #[test]
    fn solution_distance_table() {
        let mc = MaxCoverageInstance::new(3, vec![vec![0, 1], vec![2]], 2, 3).unwrap();
        let r = reduce_max_coverage(&mc).unwrap();
        let layout = reduction_layout(3);
        for (a, ra) in layout.iter().enumerate() {
            for (b, rb) in layout.iter().enumerate() {
                let want = match (*ra, *rb) {
                    _ if a == b => 0.0,
                    (PointRole::Center, PointRole::Plain(_)) | (PointRole::Plain(_), PointRole::Center) => 2.0,
                    (PointRole::Center, PointRole::Bar(_)) | (PointRole::Bar(_), PointRole::Center) => 4.0,
                    (PointRole::Center, PointRole::BarCopy(..)) | (PointRole::BarCopy(..), PointRole::Center) => 2.0,
                    (PointRole::Plain(_), PointRole::Plain(_)) => 2.0,
                    (PointRole::Plain(i), PointRole::Bar(j)) | (PointRole::Bar(j), PointRole::Plain(i)) => {
                        if i == j {
                            2.0
                        } else {
                            4.0
                        }
                    }
                    (PointRole::Plain(_), PointRole::BarCopy(..)) | (PointRole::BarCopy(..), PointRole::Plain(_)) => 2.0,
                    (PointRole::Bar(_), PointRole::Bar(_)) => 2.0,
                    (PointRole::Bar(_), PointRole::BarCopy(..)) | (PointRole::BarCopy(..), PointRole::Bar(_)) => 2.0,
                    (PointRole::BarCopy(..), PointRole::BarCopy(..)) => 0.0,
                    _ => unreachable!(),
                };
                assert_eq!(r.dataset.solution_distance(a, b), want, "{ra:?} vs {rb:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(MaxCoverageInstance::new(2, vec![vec![0, 1], vec![1, 0]], 1, 1).is_err());
        assert!(MaxCoverageInstance::new(2, vec![vec![2]], 1, 1).is_err());
        assert!(MaxCoverageInstance::new(2, vec![vec![0]], 0, 1).is_err());
        assert!(MaxCoverageInstance::new(0, vec![vec![]], 1, 0).is_err());
        let mc = example();
        assert!(predicted_objective(&mc, &[]).is_err());
        assert!(predicted_objective(&mc, &[0, 1]).is_err());
        assert!(predicted_objective(&mc, &[5]).is_err());
    }

    #[test]
    fn exhaustive_cover() {
        let mc = MaxCoverageInstance::new(4, vec![vec![0], vec![1, 2], vec![2, 3], vec![0, 3]], 2, 4).unwrap();
        assert_eq!(mc.solve_exhaustive().unwrap(), (vec![1, 3], 4));
    }
}
