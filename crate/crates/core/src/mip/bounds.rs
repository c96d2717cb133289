use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{pair_index, Dataset};
use crate::error::{Error, Result};
use crate::solvers::{count_selections, Combinations};

/// Largest full-feature distance times `1 + 1e-6`, or 1 when every pair
/// coincides.
pub fn compute_big_m(ds: &Dataset) -> f64 {
    let all: Vec<usize> = (0..ds.n_features()).collect();
    let mut cond = Vec::new();
    ds.condensed_distances(&all, &mut cond);
    let max = cond.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        max * (1.0 + 1e-6)
    } else {
        1.0
    }
}

/// Per-point bound `U_i = max_j d_X(i, j) / min { d_f(i, j) : d_f(i, j) != 0 }`,
/// skipping points `j` identical to `i` in every feature (0 if all are).
///
/// This is the classical bound for the dual multiplier of the distance
/// constraint. It is only valid when the neighbor-count row is relaxed to
/// `<= k`; with the exact equality row the optimal multiplier can exceed it
/// (see [`enumerated_alpha_bounds`]).
pub fn compute_alpha_bounds(ds: &Dataset) -> Vec<f64> {
    let n = ds.n_points();
    let p = ds.n_features();
    (0..n)
        .map(|i| {
            let mut u: f64 = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                let min_nonzero = (0..p)
                    .map(|f| ds.features()[f].distance(i, j))
                    .filter(|&d| d != 0.0)
                    .fold(f64::INFINITY, f64::min);
                if min_nonzero.is_finite() {
                    u = u.max(ds.solution_distance(i, j) / min_nonzero);
                }
            }
            u
        })
        .collect()
}

/// Smallest optimal dual multiplier `alpha` of one point's evaluation LP
/// (with the equality neighbor-count row), given the instance distances `d`
/// and solution distances `dx` to every other point.
///
/// With `S` the pessimistic neighbor set (k nearest, exact ties broken
/// towards larger `dx`), `alpha* = max(0, max (dx_o - dx_s) / (d_o - d_s))`
/// over `s` in `S`, `o` outside `S`, `d_o > d_s`.
pub fn alpha_star(d: &[f64], dx: &[f64], k: usize) -> f64 {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(dx[b].total_cmp(&dx[a])).then(a.cmp(&b)));
    let (inside, outside) = order.split_at(k.min(order.len()));
    let mut best: f64 = 0.0;
    for &s in inside {
        for &o in outside {
            if d[o] > d[s] {
                best = best.max((dx[o] - dx[s]) / (d[o] - d[s]));
            }
        }
    }
    best
}

/// Exact per-point bounds for the equality model: the largest
/// [`alpha_star`] over every selection with `1 <= |s| <= L`. Fails when the
/// number of selections exceeds `budget`.
pub fn enumerated_alpha_bounds(ds: &Dataset, max_features: usize, k: usize, budget: u128) -> Result<Vec<f64>> {
    let n = ds.n_points();
    let p = ds.n_features();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let required = count_selections(p, max_features);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut bounds = vec![0.0f64; n];
    let mut cond = Vec::new();
    let mut d = Vec::with_capacity(n);
    let mut dx = Vec::with_capacity(n);
    for l in 1..=max_features.min(p) {
        for sel in Combinations::new(p, l) {
            ds.condensed_distances(&sel, &mut cond);
            for (i, bound) in bounds.iter_mut().enumerate() {
                d.clear();
                dx.clear();
                for j in (0..n).filter(|&j| j != i) {
                    d.push(cond[pair_index(n, i, j)]);
                    dx.push(ds.solution_distance(i, j));
                }
                *bound = bound.max(alpha_star(&d, &dx, k));
            }
        }
    }
    Ok(bounds)
}
