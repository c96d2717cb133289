//! Seeded random datasets for tests and benchmarks.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::dataset::{Dataset, FeatureColumn};
use crate::error::{Error, Result};
use crate::rng;

/// Reproducible pseudo-random dataset.
///
/// Every third feature (`f % 3 == 2`) takes small integer values so that
/// instance distances tie often; the others are uniform on a 1/1000 lattice
/// in `[0, 1)`. Solution features are noisy functions of the first two
/// instance features quantized to 0.01, so some selections are clearly
/// better than others. The same arguments always give the same dataset.
pub fn generate_synthetic_dataset(
    n_points: usize,
    n_features: usize,
    n_solution_features: usize,
    seed: u64,
) -> Result<Dataset> {
    if n_points < 2 || n_features < 1 || n_solution_features < 1 {
        return Err(Error::InvalidParameter(format!(
            "synthetic dataset needs N >= 2, p >= 1, q >= 1 (got {n_points}, {n_features}, {n_solution_features})"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut columns = Vec::with_capacity(n_features);
    for f in 0..n_features {
        let values: Vec<f64> = (0..n_points)
            .map(|_| {
                if f % 3 == 2 {
                    f64::from(rng.random_range(0u32..4))
                } else {
                    f64::from(rng.random_range(0u32..1000)) / 1000.0
                }
            })
            .collect();
        columns.push(FeatureColumn::numeric(format!("f{f}"), values));
    }
    let informative: Vec<&[f64]> = columns
        .iter()
        .take(2)
        .map(|c| match c.values() {
            crate::ColumnValues::Numeric(v) => v.as_slice(),
            crate::ColumnValues::Categorical { .. } => unreachable!(),
        })
        .collect();
    let weights: Vec<(f64, f64)> = (0..n_solution_features)
        .map(|_| (rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0)))
        .collect();
    let solution_features: Vec<Vec<f64>> = (0..n_points)
        .map(|i| {
            let base: f64 = informative.iter().map(|v| v[i]).sum();
            weights
                .iter()
                .map(|&(a, b)| {
                    let noise: f64 = rng.random_range(-0.1..0.1);
                    libm::round((a * base + b * base * base + noise) * 100.0) / 100.0
                })
                .collect()
        })
        .collect();
    Dataset::from_solution_features(columns, &solution_features)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = generate_synthetic_dataset(10, 6, 4, 1).unwrap();
        let b = generate_synthetic_dataset(10, 6, 4, 1).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_dataset(10, 6, 4, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn symmetric_zero_diagonal() {
        let ds = generate_synthetic_dataset(12, 5, 3, 9).unwrap();
        for i in 0..12 {
            assert_eq!(ds.solution_distance(i, i), 0.0);
            for j in 0..12 {
                assert_eq!(ds.solution_distance(i, j), ds.solution_distance(j, i));
            }
        }
    }

    #[test]
    fn minimal_and_degenerate_sizes() {
        let ds = generate_synthetic_dataset(2, 1, 1, 5).unwrap();
        assert_eq!((ds.n_points(), ds.n_features()), (2, 1));
        assert!(generate_synthetic_dataset(1, 1, 1, 5).is_err());
        assert!(generate_synthetic_dataset(3, 0, 1, 5).is_err());
        assert!(generate_synthetic_dataset(3, 1, 0, 5).is_err());
    }
}
