use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::bounds::{compute_alpha_bounds, enumerated_alpha_bounds};
use super::check_parameters;
use super::model::{Formulation, MipModel, ModelMetadata, Sense};
use super::verify::inner_solutions;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::selection::FeatureSelection;
use crate::solvers::count_selections;

/// How the neighbor-count row of each point's evaluation LP is dualized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum KConstraint {
    /// Exactly k neighbors: `gamma_i` is free. The evaluation LP then has an
    /// integral optimum and the model reproduces the pessimistic objective.
    #[default]
    Equality,
    /// At most k neighbors: `gamma_i >= 0`. The LP may take fractions of
    /// farther points, so the model can overestimate the objective.
    Inequality,
}

/// Source of the upper bounds `U_i` on `alpha_i`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AlphaBoundRule {
    /// [`compute_alpha_bounds`].
    Lemma,
    /// [`enumerated_alpha_bounds`]; fails above `budget` selections.
    Enumerated { budget: u128 },
    /// Enumerated bounds when the equality row is used and the selection
    /// count fits in `budget`, the lemma otherwise.
    Auto { budget: u128 },
    /// One value per point.
    Explicit(Vec<f64>),
}

impl Default for AlphaBoundRule {
    fn default() -> Self {
        AlphaBoundRule::Auto { budget: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PessimisticOptions {
    pub alpha_bounds: AlphaBoundRule,
    pub k_constraint: KConstraint,
}

/// Resolves the bound rule; the second value names the rule actually used.
pub(crate) fn resolve_alpha_bounds(
    ds: &Dataset,
    max_features: usize,
    k: usize,
    opts: &PessimisticOptions,
) -> Result<(Vec<f64>, &'static str)> {
    let n = ds.n_points();
    match &opts.alpha_bounds {
        AlphaBoundRule::Lemma => Ok((compute_alpha_bounds(ds), "lemma")),
        AlphaBoundRule::Enumerated { budget } => {
            Ok((enumerated_alpha_bounds(ds, max_features, k, *budget)?, "enumerated"))
        }
        AlphaBoundRule::Auto { budget } => {
            if opts.k_constraint == KConstraint::Equality && count_selections(ds.n_features(), max_features) <= *budget {
                Ok((enumerated_alpha_bounds(ds, max_features, k, *budget)?, "enumerated"))
            } else {
                Ok((compute_alpha_bounds(ds), "lemma"))
            }
        }
        AlphaBoundRule::Explicit(u) => {
            if u.len() != n || u.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "explicit alpha bounds need {n} finite nonnegative values"
                )));
            }
            Ok((u.clone(), "explicit"))
        }
    }
}

/// Pessimistic model: for every point the evaluation LP (maximize the
/// solution distance over neighbor sets of minimal total instance distance)
/// is replaced by its dual, and products of `b_f` with the dual variables
/// are linearized with envelopes using the bounds `U_i`.
pub fn build_pessimistic_mip(ds: &Dataset, max_features: usize, k: usize, opts: &PessimisticOptions) -> Result<MipModel> {
    check_parameters(ds, max_features, k)?;
    let (u, rule) = resolve_alpha_bounds(ds, max_features, k, opts)?;
    let n = ds.n_points();
    let p = ds.n_features();
    let kc = match opts.k_constraint {
        KConstraint::Equality => "equality",
        KConstraint::Inequality => "inequality",
    };
    let mut model = MipModel::new(ModelMetadata {
        formulation: Formulation::Pessimistic,
        n_points: n,
        n_features: p,
        k,
        max_features,
        notes: vec![format!("alpha_bounds={rule}"), format!("k_constraint={kc}")],
    });
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let gamma_lower = match opts.k_constraint {
        KConstraint::Equality => f64::NEG_INFINITY,
        KConstraint::Inequality => 0.0,
    };

    let b: Vec<usize> = (0..p).map(|f| model.binary(format!("b_{f}"))).collect::<Result<_>>()?;
    let alpha: Vec<usize> = (0..n)
        .map(|i| model.continuous(format!("alpha_{i}"), 0.0, u[i]))
        .collect::<Result<_>>()?;
    let beta: Vec<usize> = pairs
        .iter()
        .map(|&(i, j)| model.continuous(format!("beta_{i}_{j}"), 0.0, u[i]))
        .collect::<Result<_>>()?;
    let gamma: Vec<usize> = (0..n)
        .map(|i| model.continuous(format!("gamma_{i}"), gamma_lower, f64::INFINITY))
        .collect::<Result<_>>()?;
    let delta: Vec<usize> = pairs
        .iter()
        .map(|&(i, j)| model.continuous(format!("delta_{i}_{j}"), 0.0, f64::INFINITY))
        .collect::<Result<_>>()?;
    // za[f * n + i] = b_f * alpha_i, zb[f * pairs + q] = b_f * beta_q
    let mut za = Vec::with_capacity(p * n);
    let mut zb = Vec::with_capacity(p * pairs.len());
    for f in 0..p {
        for i in 0..n {
            za.push(model.continuous(format!("za_{f}_{i}"), 0.0, u[i])?);
        }
    }
    for f in 0..p {
        for &(i, j) in &pairs {
            zb.push(model.continuous(format!("zb_{f}_{i}_{j}"), 0.0, u[i])?);
        }
    }

    let dist = |f: usize, i: usize, j: usize| ds.features()[f].distance(i, j);
    for (q, &(i, j)) in pairs.iter().enumerate() {
        for f in 0..p {
            model.add_objective_term(zb[f * pairs.len() + q], dist(f, i, j))?;
        }
    }
    for &g in &gamma {
        model.add_objective_term(g, k as f64)?;
    }
    for &dl in &delta {
        model.add_objective_term(dl, 1.0)?;
    }

    let all_b: Vec<(usize, f64)> = b.iter().map(|&v| (v, 1.0)).collect();
    model.add_constraint("L_features_lb".to_string(), all_b.clone(), Sense::Ge, 1.0)?;
    model.add_constraint("L_features_ub".to_string(), all_b, Sense::Le, max_features as f64)?;
    for (q, &(i, j)) in pairs.iter().enumerate() {
        let mut terms: Vec<(usize, f64)> = (0..p).map(|f| (za[f * n + i], dist(f, i, j))).collect();
        terms.push((gamma[i], 1.0));
        terms.push((delta[q], 1.0));
        model.add_constraint(format!("b_cons_{i}_{j}"), terms, Sense::Ge, ds.solution_distance(i, j))?;
    }
    for i in 0..n {
        let mut terms: Vec<(usize, f64)> = (0..n - 1).map(|r| (beta[i * (n - 1) + r], 1.0)).collect();
        terms.push((alpha[i], -(k as f64)));
        model.add_constraint(format!("alpha_bound_{i}"), terms, Sense::Ge, 0.0)?;
    }
    for (q, &(i, j)) in pairs.iter().enumerate() {
        model.add_constraint(
            format!("beta_bound_{i}_{j}"),
            vec![(alpha[i], 1.0), (beta[q], -1.0)],
            Sense::Ge,
            0.0,
        )?;
    }
    let envelope = |model: &mut MipModel, tag: &str, z: usize, bf: usize, var: usize, ui: f64| -> Result<()> {
        model.add_constraint(format!("{tag}_ub"), vec![(z, 1.0), (bf, -ui)], Sense::Le, 0.0)?;
        model.add_constraint(format!("{tag}_var"), vec![(z, 1.0), (var, -1.0)], Sense::Le, 0.0)?;
        model.add_constraint(format!("{tag}_lb"), vec![(z, 1.0), (var, -1.0), (bf, -ui)], Sense::Ge, -ui)
    };
    for f in 0..p {
        for i in 0..n {
            envelope(&mut model, &format!("za_{f}_{i}"), za[f * n + i], b[f], alpha[i], u[i])?;
        }
    }
    for f in 0..p {
        for (q, &(i, j)) in pairs.iter().enumerate() {
            envelope(&mut model, &format!("zb_{f}_{i}_{j}"), zb[f * pairs.len() + q], b[f], beta[q], u[i])?;
        }
    }
    Ok(model)
}

/// Optimal continuous completion of the pessimistic model for the binary
/// assignment given by `selection` (bounds and count row read back from
/// `model`). Its objective is the model's inner optimum for `selection`.
pub fn pessimistic_certificate(
    ds: &Dataset,
    model: &MipModel,
    selection: &FeatureSelection,
    k: usize,
) -> Result<Vec<f64>> {
    let n = ds.n_points();
    let lookup = |name: &str| {
        model
            .var(name)
            .ok_or_else(|| Error::InvalidModel(format!("model has no variable '{name}'")))
    };
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        bounds.push(model.variables()[lookup(&format!("alpha_{i}"))?].upper);
    }
    let kc = if model.variables()[lookup("gamma_0")?].lower == 0.0 {
        KConstraint::Inequality
    } else {
        KConstraint::Equality
    };
    let mut values = vec![0.0; model.variables().len()];
    for f in selection.iter() {
        values[lookup(&format!("b_{f}"))?] = 1.0;
    }
    for (i, (_, a, d, dx)) in inner_solutions(ds, selection, k, &bounds, kc)?.into_iter().enumerate() {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let mut by_distance: Vec<usize> = (0..d.len()).collect();
        by_distance.sort_by(|&x, &y| d[x].total_cmp(&d[y]).then(x.cmp(&y)));
        let mut g: Vec<f64> = d.iter().zip(&dx).map(|(&dj, &xj)| xj - a * dj).collect();
        let mut sorted = g.clone();
        sorted.sort_by(|x, y| y.total_cmp(x));
        let gamma = match kc {
            KConstraint::Equality => sorted[k - 1],
            KConstraint::Inequality => sorted[k - 1].max(0.0),
        };
        values[lookup(&format!("alpha_{i}"))?] = a;
        values[lookup(&format!("gamma_{i}"))?] = gamma;
        for &r in &by_distance[..k] {
            let j = others[r];
            values[lookup(&format!("beta_{i}_{j}"))?] = a;
            for f in selection.iter() {
                values[lookup(&format!("zb_{f}_{i}_{j}"))?] = a;
            }
        }
        for f in selection.iter() {
            values[lookup(&format!("za_{f}_{i}"))?] = a;
        }
        for (r, gj) in g.iter_mut().enumerate() {
            let j = others[r];
            values[lookup(&format!("delta_{i}_{j}"))?] = (*gj - gamma).max(0.0);
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_objective, EvalConfig, TieMode};
    use crate::fixtures;
    use crate::mip::verify::pessimistic_inner_optimum;
    use crate::FeatureColumn;

    #[test]
    fn toy_counts() {
        let ds = fixtures::toy_example();
        let m = build_pessimistic_mip(&ds, 1, 1, &PessimisticOptions::default()).unwrap();
        let aux = m
            .variables()
            .iter()
            .filter(|v| v.name.starts_with("za_") || v.name.starts_with("zb_"))
            .count();
        assert_eq!(aux, 2 * 3 + 2 * 6);
        assert_eq!(m.n_binaries(), 2);
        assert_eq!(m.variables().len(), 2 + 3 + 6 + 3 + 6 + 18);
        assert_eq!(m.constraints().len(), 2 + 3 + 2 * 6 + 3 * 18);
        assert!(m.metadata.notes.iter().any(|s| s == "alpha_bounds=enumerated"));
    }

    #[test]
    fn certificate_reaches_core_objective() {
        let ds = fixtures::toy_example();
        let m = build_pessimistic_mip(&ds, 2, 1, &PessimisticOptions::default()).unwrap();
        for (sel, want) in [(vec![0], 2.0), (vec![1], 3.0), (vec![0, 1], 2.0)] {
            let sel = FeatureSelection::new(sel).unwrap();
            let values = pessimistic_certificate(&ds, &m, &sel, 1).unwrap();
            let obj = m.check_assignment(&values, 1e-9).unwrap();
            let core = evaluate_objective(&ds, &sel, &EvalConfig::new(1, TieMode::Pessimistic)).unwrap();
            assert!((obj - want).abs() < 1e-9 && (core - want).abs() < 1e-12, "{sel}: {obj}");
        }
    }

    #[test]
    fn lemma_bounds_with_relaxed_row_overestimate_toy() {
        let ds = fixtures::toy_example();
        let opts = PessimisticOptions {
            alpha_bounds: AlphaBoundRule::Lemma,
            k_constraint: KConstraint::Inequality,
        };
        let m = build_pessimistic_mip(&ds, 1, 1, &opts).unwrap();
        let sel = FeatureSelection::new(vec![0]).unwrap();
        let values = pessimistic_certificate(&ds, &m, &sel, 1).unwrap();
        let obj = m.check_assignment(&values, 1e-9).unwrap();
        assert!((obj - 2.55).abs() < 1e-9);
        let u = compute_alpha_bounds(&ds);
        let inner = pessimistic_inner_optimum(&ds, &sel, 1, &u, KConstraint::Inequality).unwrap();
        assert!((obj - inner).abs() < 1e-9);
    }

    #[test]
    fn zero_bounds_collapse_products() {
        let ds = Dataset::new(
            vec![FeatureColumn::numeric("c", vec![1.0, 1.0, 1.0])],
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
        )
        .unwrap();
        let opts = PessimisticOptions {
            alpha_bounds: AlphaBoundRule::Lemma,
            ..Default::default()
        };
        let m = build_pessimistic_mip(&ds, 1, 1, &opts).unwrap();
        assert!(m
            .variables()
            .iter()
            .filter(|v| v.name.starts_with('z') || v.name.starts_with("alpha") || v.name.starts_with("beta"))
            .all(|v| v.upper == 0.0));
    }

    #[test]
    fn explicit_bounds_are_validated() {
        let ds = fixtures::toy_example();
        let bad = PessimisticOptions {
            alpha_bounds: AlphaBoundRule::Explicit(vec![1.0]),
            ..Default::default()
        };
        assert!(build_pessimistic_mip(&ds, 1, 1, &bad).is_err());
        let tight = PessimisticOptions {
            alpha_bounds: AlphaBoundRule::Enumerated { budget: 1 },
            ..Default::default()
        };
        assert!(matches!(build_pessimistic_mip(&ds, 2, 1, &tight), Err(Error::BudgetExceeded { .. })));
    }
}
