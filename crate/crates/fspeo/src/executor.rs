use std::sync::Arc;

use fspeo_core::{evaluate_objective, BatchEvaluator, Dataset, EvalConfig, FeatureSelection, Result};
use rayon::prelude::*;
use rayon::ThreadPool;

/// Evaluates a batch on a rayon pool. Results come back in input order, so
/// searches are identical for every pool size.
#[derive(Clone, Default)]
pub struct Parallel {
    pool: Option<Arc<ThreadPool>>,
}

impl Parallel {
    /// `threads = None` uses the global pool (available parallelism).
    pub fn new(threads: Option<usize>) -> anyhow::Result<Self> {
        let pool = match threads {
            None => None,
            Some(t) => Some(Arc::new(rayon::ThreadPoolBuilder::new().num_threads(t).build()?)),
        };
        Ok(Self { pool })
    }

    /// Runs `f` inside this evaluator's pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }
}

impl BatchEvaluator for Parallel {
    fn evaluate_batch(&self, ds: &Dataset, cfg: &EvalConfig, selections: &[FeatureSelection]) -> Result<Vec<f64>> {
        self.install(|| selections.par_iter().map(|s| evaluate_objective(ds, s, cfg)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fspeo_core::solvers::{k_opt_search, k_opt_search_with, KOptConfig};
    use fspeo_core::synthetic::generate_synthetic_dataset;
    use fspeo_core::TieMode;

    #[test]
    fn pool_size_does_not_change_search() {
        let ds = generate_synthetic_dataset(30, 12, 3, 4).unwrap();
        let eval = EvalConfig::new(3, TieMode::Pessimistic);
        let cfg = KOptConfig::new(3, 17);
        let seq = k_opt_search(&ds, &cfg, &eval).unwrap();
        for threads in [1, 2, 5] {
            let par = Parallel::new(Some(threads)).unwrap();
            assert_eq!(k_opt_search_with(&ds, &cfg, &eval, &par).unwrap(), seq);
        }
    }
}
