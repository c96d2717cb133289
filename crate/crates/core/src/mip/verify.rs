//! Closed-form inner optimum of the pessimistic model for a fixed feature
//! selection.
//!
//! For one point with instance distances `d_j`, solution distances `dx_j`
//! and `g_j(alpha) = dx_j - alpha d_j`, minimizing over `beta`, `gamma`,
//! `delta` leaves a convex piecewise-linear function of `alpha`:
//!
//! - equality row: `alpha R + (sum of the k largest g_j)`,
//! - inequality row (`gamma >= 0`): `alpha R + (sum of the k largest
//!   max(g_j, 0))`,
//!
//! with `R` the sum of the k smallest `d_j`. Its minimum over `[0, U]` is
//! attained at `0`, `U` or a breakpoint, all of which are enumerated.

use alloc::vec::Vec;

use super::pessimistic::KConstraint;
use crate::dataset::{pair_index, Dataset};
use crate::error::{Error, Result};
use crate::selection::FeatureSelection;

fn k_smallest_sum(d: &[f64], k: usize) -> f64 {
    let mut v = d.to_vec();
    v.sort_by(f64::total_cmp);
    v[..k].iter().sum()
}

fn inner_value(d: &[f64], dx: &[f64], k: usize, r: f64, alpha: f64, kc: KConstraint) -> f64 {
    let mut g: Vec<f64> = d
        .iter()
        .zip(dx)
        .map(|(&dj, &xj)| {
            let v = xj - alpha * dj;
            match kc {
                KConstraint::Equality => v,
                KConstraint::Inequality => v.max(0.0),
            }
        })
        .collect();
    g.sort_by(|a, b| b.total_cmp(a));
    alpha * r + g[..k].iter().sum::<f64>()
}

/// Minimum over `alpha` in `[0, upper]` of one point's inner function;
/// returns `(value, smallest minimizing alpha)`.
pub fn inner_point_optimum(d: &[f64], dx: &[f64], k: usize, upper: f64, kc: KConstraint) -> (f64, f64) {
    assert!(d.len() == dx.len() && k >= 1 && k <= d.len(), "inner problem needs 1 <= k <= len");
    let r = k_smallest_sum(d, k);
    let mut candidates = alloc::vec![0.0];
    if upper.is_finite() && upper > 0.0 {
        candidates.push(upper);
    }
    let inside = |a: f64| a > 0.0 && a < upper;
    for a in 0..d.len() {
        for b in a + 1..d.len() {
            if d[a] != d[b] {
                let t = (dx[a] - dx[b]) / (d[a] - d[b]);
                if inside(t) {
                    candidates.push(t);
                }
            }
        }
        if kc == KConstraint::Inequality && d[a] > 0.0 && inside(dx[a] / d[a]) {
            candidates.push(dx[a] / d[a]);
        }
    }
    candidates.sort_by(f64::total_cmp);
    let mut best = (f64::INFINITY, 0.0);
    for &alpha in &candidates {
        let v = inner_value(d, dx, k, r, alpha, kc);
        if v < best.0 {
            best = (v, alpha);
        }
    }
    best
}

/// Sum over all points of [`inner_point_optimum`] under `selection`, with
/// `bounds[i]` as the upper bound on `alpha_i`.
pub fn pessimistic_inner_optimum(
    ds: &Dataset,
    selection: &FeatureSelection,
    k: usize,
    bounds: &[f64],
    kc: KConstraint,
) -> Result<f64> {
    Ok(inner_solutions(ds, selection, k, bounds, kc)?.iter().map(|s| s.0).sum())
}

/// Per point: `(value, alpha, d, dx)` with `d`/`dx` over the other points
/// in index order.
pub(crate) fn inner_solutions(
    ds: &Dataset,
    selection: &FeatureSelection,
    k: usize,
    bounds: &[f64],
    kc: KConstraint,
) -> Result<Vec<(f64, f64, Vec<f64>, Vec<f64>)>> {
    let n = ds.n_points();
    ds.check_selection(selection)?;
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    if bounds.len() != n {
        return Err(Error::InvalidParameter(alloc::format!(
            "expected {n} alpha bounds, got {}",
            bounds.len()
        )));
    }
    let mut cond = Vec::new();
    ds.condensed_distances(selection.as_slice(), &mut cond);
    Ok((0..n)
        .map(|i| {
            let others = (0..n).filter(|&j| j != i);
            let d: Vec<f64> = others.clone().map(|j| cond[pair_index(n, i, j)]).collect();
            let dx: Vec<f64> = others.map(|j| ds.solution_distance(i, j)).collect();
            let (value, alpha) = inner_point_optimum(&d, &dx, k, bounds[i], kc);
            (value, alpha, d, dx)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_objective, EvalConfig, TieMode};
    use crate::fixtures;
    use crate::mip::bounds::{alpha_star, compute_alpha_bounds, enumerated_alpha_bounds};

    #[test]
    fn toy_point_two_needs_more_than_the_lemma_bound() {
        // under {upper}, point 2 sees point 1 at 1.1 (dx 0) and point 0 at 2 (dx 1)
        let (d, dx) = ([2.0, 1.1], [1.0, 0.0]);
        let (exact, alpha) = inner_point_optimum(&d, &dx, 1, f64::INFINITY, KConstraint::Equality);
        assert!(exact.abs() < 1e-12);
        assert!((alpha - alpha_star(&d, &dx, 1)).abs() < 1e-12);
        let (capped, _) = inner_point_optimum(&d, &dx, 1, 0.5, KConstraint::Equality);
        assert!((capped - 0.55).abs() < 1e-12);
        // relaxing the count row lets the LP mix in a fraction of point 0
        let (relaxed, _) = inner_point_optimum(&d, &dx, 1, f64::INFINITY, KConstraint::Inequality);
        assert!((relaxed - 0.55).abs() < 1e-12);
    }

    #[test]
    fn toy_model_values() {
        let ds = fixtures::toy_example();
        let upper = FeatureSelection::new(alloc::vec![0]).unwrap();
        let exact = enumerated_alpha_bounds(&ds, 1, 1, 100).unwrap();
        let v = pessimistic_inner_optimum(&ds, &upper, 1, &exact, KConstraint::Equality).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let lemma = compute_alpha_bounds(&ds);
        let v = pessimistic_inner_optimum(&ds, &upper, 1, &lemma, KConstraint::Inequality).unwrap();
        assert!((v - 2.55).abs() < 1e-9, "{v}");
    }

    #[test]
    fn matches_core_with_exact_bounds() {
        for seed in 0..6 {
            let ds = crate::synthetic::generate_synthetic_dataset(7, 4, 2, seed).unwrap();
            for k in 1..4 {
                let bounds = enumerated_alpha_bounds(&ds, 4, k, 1000).unwrap();
                for sel in crate::solvers::Combinations::new(4, 2) {
                    let sel = FeatureSelection::new(sel).unwrap();
                    let core = evaluate_objective(&ds, &sel, &EvalConfig::new(k, TieMode::Pessimistic).with_tolerance(0.0))
                        .unwrap();
                    let inner = pessimistic_inner_optimum(&ds, &sel, k, &bounds, KConstraint::Equality).unwrap();
                    assert!((core - inner).abs() < 1e-9 * (1.0 + core), "seed {seed} k {k} {sel}: {core} vs {inner}");
                }
            }
        }
    }
}
