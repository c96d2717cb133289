use crate::dataset::Dataset;
use crate::error::Result;
use crate::eval::{evaluate_objective, EvalConfig};
use crate::selection::FeatureSelection;

/// Relative tolerance of [`crosscheck_solution`].
pub const CROSSCHECK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrosscheckReport {
    pub selection: FeatureSelection,
    pub mip_objective_claimed: f64,
    pub core_objective: f64,
    /// `|claimed - core| <= tolerance * max(1, |core|)`.
    #[cfg_attr(feature = "serde", serde(rename = "match"))]
    pub matches: bool,
    pub tolerance: f64,
}

/// Re-evaluates a solver's selection with the core objective. A mismatch
/// is reported, not raised.
pub fn crosscheck_solution(
    ds: &Dataset,
    selection: &FeatureSelection,
    claimed: f64,
    cfg: &EvalConfig,
) -> Result<CrosscheckReport> {
    let core_objective = evaluate_objective(ds, selection, cfg)?;
    let tolerance = CROSSCHECK_TOLERANCE;
    Ok(CrosscheckReport {
        selection: selection.clone(),
        mip_objective_claimed: claimed,
        core_objective,
        matches: (claimed - core_objective).abs() <= tolerance * core_objective.abs().max(1.0),
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::TieMode;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn toy_reports() {
        let ds = fixtures::toy_example();
        let cfg = EvalConfig::new(1, TieMode::Pessimistic);
        let upper = FeatureSelection::new(vec![0]).unwrap();
        let lower = FeatureSelection::new(vec![1]).unwrap();
        assert!(crosscheck_solution(&ds, &upper, 2.0, &cfg).unwrap().matches);
        let r = crosscheck_solution(&ds, &lower, 2.0, &cfg).unwrap();
        assert!(!r.matches);
        assert_eq!(r.core_objective, 3.0);
        assert!(crosscheck_solution(&ds, &upper, 2.0 + 1e-7, &cfg).unwrap().matches);
    }
}
