use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::bounds::compute_big_m;
use super::check_parameters;
use super::model::{Formulation, MipModel, ModelMetadata, Sense};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::eval::{evaluate_selection, EvalConfig, TieMode};
use crate::selection::FeatureSelection;

/// Optimistic model; `big_m` overrides [`compute_big_m`].
///
/// `y_i_j = 1` forces `d_i_j <= eps_i` and `y_i_j = 0` forces
/// `d_i_j >= eps_i`, so the selected neighbors form a prefix of the distance
/// order with ties free to go either way.
pub fn build_optimistic_mip(ds: &Dataset, max_features: usize, k: usize, big_m: Option<f64>) -> Result<MipModel> {
    check_parameters(ds, max_features, k)?;
    let m = big_m.unwrap_or_else(|| compute_big_m(ds));
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("big-M must be positive and finite, got {m}")));
    }
    let n = ds.n_points();
    let p = ds.n_features();
    let mut model = MipModel::new(ModelMetadata {
        formulation: Formulation::Optimistic,
        n_points: n,
        n_features: p,
        k,
        max_features,
        notes: vec![format!("big_m={m}")],
    });
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();

    let b: Vec<usize> = (0..p).map(|f| model.binary(format!("b_{f}"))).collect::<Result<_>>()?;
    let y: Vec<usize> = pairs
        .iter()
        .map(|(i, j)| model.binary(format!("y_{i}_{j}")))
        .collect::<Result<_>>()?;
    let d: Vec<usize> = pairs
        .iter()
        .map(|(i, j)| model.continuous(format!("d_{i}_{j}"), 0.0, f64::INFINITY))
        .collect::<Result<_>>()?;
    let eps: Vec<usize> = (0..n)
        .map(|i| model.continuous(format!("eps_{i}"), 0.0, f64::INFINITY))
        .collect::<Result<_>>()?;

    for (&(i, j), &yv) in pairs.iter().zip(&y) {
        model.add_objective_term(yv, ds.solution_distance(i, j))?;
    }
    for i in 0..n {
        let terms = (0..n - 1).map(|r| (y[i * (n - 1) + r], 1.0)).collect();
        model.add_constraint(format!("k_neighbors_{i}"), terms, Sense::Ge, k as f64)?;
    }
    let all_b: Vec<(usize, f64)> = b.iter().map(|&v| (v, 1.0)).collect();
    model.add_constraint("L_features_lb".to_string(), all_b.clone(), Sense::Ge, 1.0)?;
    model.add_constraint("L_features_ub".to_string(), all_b, Sense::Le, max_features as f64)?;
    for (q, &(i, j)) in pairs.iter().enumerate() {
        let mut terms = vec![(d[q], 1.0)];
        terms.extend((0..p).map(|f| (b[f], -ds.features()[f].distance(i, j))));
        model.add_constraint(format!("instance_diff_{i}_{j}"), terms, Sense::Eq, 0.0)?;
        model.add_constraint(
            format!("nb1_{i}_{j}"),
            vec![(d[q], 1.0), (eps[i], -1.0), (y[q], m)],
            Sense::Le,
            m,
        )?;
        model.add_constraint(
            format!("nb2_{i}_{j}"),
            vec![(eps[i], 1.0), (d[q], -1.0), (y[q], -m)],
            Sense::Le,
            0.0,
        )?;
    }
    Ok(model)
}

/// Feasible assignment of [`build_optimistic_mip`]'s variables for
/// `selection`: the optimistic neighbor sets under exact ties. Its
/// objective equals the optimistic objective of `selection`.
pub fn optimistic_certificate(ds: &Dataset, model: &MipModel, selection: &FeatureSelection, k: usize) -> Result<Vec<f64>> {
    let n = ds.n_points();
    let cfg = EvalConfig::new(k, TieMode::Optimistic).with_tolerance(0.0);
    let eval = evaluate_selection(ds, selection, &cfg)?;
    let mut values = vec![0.0; model.variables().len()];
    let mut set = |name: &str, x: f64| -> Result<()> {
        let v = model
            .var(name)
            .ok_or_else(|| Error::InvalidModel(format!("model has no variable '{name}'")))?;
        values[v] = x;
        Ok(())
    };
    for f in selection.iter() {
        set(&format!("b_{f}"), 1.0)?;
    }
    for (i, point) in eval.per_point.iter().enumerate() {
        let mut eps: f64 = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            let dij = ds.selected_instance_distance(i, j, selection)?;
            set(&format!("d_{i}_{j}"), dij)?;
            if point.neighbors.contains(&j) {
                set(&format!("y_{i}_{j}"), 1.0)?;
                eps = eps.max(dij);
            }
        }
        set(&format!("eps_{i}"), eps)?;
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mip::model::VarKind;

    #[test]
    fn toy_counts() {
        let ds = fixtures::toy_example();
        let m = build_optimistic_mip(&ds, 1, 1, None).unwrap();
        assert_eq!(m.n_binaries(), 2 + 6);
        assert_eq!(m.n_continuous(), 6 + 3);
        assert_eq!(m.constraints().len(), 3 * 6 + 2 + 3);
        assert!(m.variables().iter().all(|v| v.kind == VarKind::Binary || v.lower == 0.0));
    }

    #[test]
    fn certificates_are_feasible_with_matching_objective() {
        let ds = fixtures::knapsack_example();
        let m = build_optimistic_mip(&ds, 2, 1, None).unwrap();
        for sel in [vec![0], vec![1], vec![2, 4], vec![3, 1]] {
            let sel = FeatureSelection::new(sel).unwrap();
            let values = optimistic_certificate(&ds, &m, &sel, 1).unwrap();
            let obj = m.check_assignment(&values, 1e-9).unwrap();
            let core = crate::eval::evaluate_objective(&ds, &sel, &EvalConfig::new(1, TieMode::Optimistic)).unwrap();
            assert!((obj - core).abs() < 1e-9, "{sel}: {obj} vs {core}");
        }
    }

    #[test]
    fn two_points_force_both_neighbors() {
        let ds = Dataset::new(
            vec![crate::FeatureColumn::numeric("a", vec![0.0, 1.0])],
            vec![vec![0.0, 2.0], vec![2.0, 0.0]],
        )
        .unwrap();
        let m = build_optimistic_mip(&ds, 1, 1, None).unwrap();
        let k_rows: Vec<_> = m.constraints().iter().filter(|c| c.name.starts_with("k_neighbors")).collect();
        assert_eq!(k_rows.len(), 2);
        assert!(k_rows.iter().all(|c| c.terms.len() == 1 && c.rhs == 1.0 && c.sense == Sense::Ge));
    }

    #[test]
    fn rejects_bad_parameters() {
        let ds = fixtures::toy_example();
        assert!(build_optimistic_mip(&ds, 3, 1, None).is_err());
        assert!(build_optimistic_mip(&ds, 1, 3, None).is_err());
        assert!(build_optimistic_mip(&ds, 1, 1, Some(0.0)).is_err());
    }
}
