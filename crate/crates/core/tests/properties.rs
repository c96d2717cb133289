use fspeo_core::hardness::{predicted_objective, reduce_max_coverage, MaxCoverageInstance};
use fspeo_core::mip::{
    build_optimistic_mip, build_pessimistic_mip, compute_big_m, enumerated_alpha_bounds, optimistic_certificate,
    pessimistic_certificate, pessimistic_inner_optimum, to_lp_string, KConstraint, PessimisticOptions,
};
use fspeo_core::solvers::{exact_enumeration, k_opt_search, swap_neighborhood, Combinations, KOptConfig};
use fspeo_core::{
    classify_neighbors, evaluate_objective, evaluate_selection, solution_distance_matrix, Dataset, EvalConfig,
    FeatureColumn, FeatureSelection, TieMode,
};
use proptest::prelude::*;

/// Small integer-valued data, so exact ties are common.
fn tie_heavy() -> impl Strategy<Value = Dataset> {
    (3usize..9, 1usize..5, 1usize..4).prop_flat_map(|(n, p, q)| {
        (
            prop::collection::vec(prop::collection::vec(0u8..3, n), p),
            prop::collection::vec(prop::collection::vec(0u8..3, q), n),
        )
            .prop_map(|(cols, sols)| {
                let features = cols
                    .into_iter()
                    .enumerate()
                    .map(|(f, c)| FeatureColumn::numeric(format!("f{f}"), c.into_iter().map(f64::from).collect()))
                    .collect();
                let sols: Vec<Vec<f64>> = sols.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
                Dataset::new(features, solution_distance_matrix(&sols)).unwrap()
            })
    })
}

fn selection_and_k(ds: &Dataset) -> impl Strategy<Value = (FeatureSelection, usize)> {
    let p = ds.n_features();
    let n = ds.n_points();
    (prop::collection::btree_set(0..p, 1..=p), 1..n)
        .prop_map(|(s, k)| (FeatureSelection::new(s.into_iter().collect()).unwrap(), k))
}

fn with_selection() -> impl Strategy<Value = (Dataset, FeatureSelection, usize)> {
    tie_heavy().prop_flat_map(|ds| {
        let sk = selection_and_k(&ds);
        (Just(ds), sk).prop_map(|(ds, (s, k))| (ds, s, k))
    })
}

/// Contribution of point `i` by enumerating every way to fill the open slots
/// from the borderline points.
fn brute_force_point(ds: &Dataset, i: usize, s: &FeatureSelection, k: usize, mode: TieMode) -> f64 {
    let c = classify_neighbors(ds, i, s, &EvalConfig::new(k, mode)).unwrap();
    let strict: f64 = c.strict.iter().map(|&j| ds.solution_distance(i, j)).sum();
    let fills = Combinations::new(c.borderline.len(), c.k_bar).map(|pick| {
        pick.iter().map(|&b| ds.solution_distance(i, c.borderline[b])).sum::<f64>()
    });
    strict
        + match mode {
            TieMode::Pessimistic => fills.fold(f64::NEG_INFINITY, f64::max),
            TieMode::Optimistic => fills.fold(f64::INFINITY, f64::min),
        }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pessimistic_never_below_optimistic((ds, s, k) in with_selection()) {
        let opt = evaluate_objective(&ds, &s, &EvalConfig::new(k, TieMode::Optimistic)).unwrap();
        let pes = evaluate_objective(&ds, &s, &EvalConfig::new(k, TieMode::Pessimistic)).unwrap();
        prop_assert!(pes >= opt);
    }

    #[test]
    fn classification_bounds_k((ds, s, k) in with_selection()) {
        for i in 0..ds.n_points() {
            let c = classify_neighbors(&ds, i, &s, &EvalConfig::new(k, TieMode::Pessimistic)).unwrap();
            prop_assert!(c.strict.len() < k);
            prop_assert!(k <= c.strict.len() + c.borderline.len());
            prop_assert_eq!(c.k_bar, k - c.strict.len());
        }
    }

    #[test]
    fn contributions_match_subset_enumeration((ds, s, k) in with_selection()) {
        for mode in [TieMode::Optimistic, TieMode::Pessimistic] {
            let r = evaluate_selection(&ds, &s, &EvalConfig::new(k, mode)).unwrap();
            for i in 0..ds.n_points() {
                prop_assert_eq!(r.per_point[i].contribution, brute_force_point(&ds, i, &s, k, mode));
                prop_assert_eq!(r.per_point[i].neighbors.len(), k);
            }
        }
    }

    #[test]
    fn objective_is_permutation_invariant((ds, s, k) in with_selection(), rot in 0usize..8) {
        let n = ds.n_points();
        let order: Vec<usize> = (0..n).map(|i| (i * 5 + rot) % n).collect();
        let mut seen = order.clone();
        seen.sort_unstable();
        seen.dedup();
        prop_assume!(seen.len() == n);
        let moved = ds.reordered(&order).unwrap();
        for mode in [TieMode::Optimistic, TieMode::Pessimistic] {
            let cfg = EvalConfig::new(k, mode);
            prop_assert_eq!(evaluate_objective(&ds, &s, &cfg).unwrap(), evaluate_objective(&moved, &s, &cfg).unwrap());
        }
    }

    #[test]
    fn constant_selection_makes_everyone_borderline(ds in tie_heavy(), k_seed in 0usize..100) {
        let n = ds.n_points();
        let k = 1 + k_seed % (n - 1);
        let mut features: Vec<FeatureColumn> = ds.features().to_vec();
        features.push(FeatureColumn::numeric("flat", vec![7.0; n]));
        let ds = Dataset::new(features, ds.solution_distance_rows()).unwrap();
        let s = FeatureSelection::new(vec![ds.n_features() - 1]).unwrap();
        for mode in [TieMode::Optimistic, TieMode::Pessimistic] {
            let got = evaluate_objective(&ds, &s, &EvalConfig::new(k, mode)).unwrap();
            let want: f64 = (0..n).map(|i| {
                let mut row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| ds.solution_distance(i, j)).collect();
                row.sort_by(f64::total_cmp);
                if mode == TieMode::Pessimistic { row.reverse(); }
                row[..k].iter().sum::<f64>()
            }).sum();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn big_m_dominates_selected_distances((ds, s, _k) in with_selection()) {
        let m = compute_big_m(&ds);
        for i in 0..ds.n_points() {
            for j in 0..ds.n_points() {
                prop_assert!(ds.selected_instance_distance(i, j, &s).unwrap() <= m);
            }
        }
    }

    #[test]
    fn optimistic_model_accepts_knn_assignment((ds, s, k) in with_selection()) {
        let model = build_optimistic_mip(&ds, ds.n_features(), k, None).unwrap();
        let values = optimistic_certificate(&ds, &model, &s, k).unwrap();
        let obj = model.check_assignment(&values, 1e-9);
        prop_assert!(obj.is_ok(), "{:?}", obj);
        let core = evaluate_objective(&ds, &s, &EvalConfig::new(k, TieMode::Optimistic)).unwrap();
        prop_assert!((obj.unwrap() - core).abs() < 1e-9);
    }

    #[test]
    fn pessimistic_inner_optimum_is_the_objective((ds, s, k) in with_selection()) {
        let l = ds.n_features();
        let bounds = enumerated_alpha_bounds(&ds, l, k, 1000).unwrap();
        let inner = pessimistic_inner_optimum(&ds, &s, k, &bounds, KConstraint::Equality).unwrap();
        let core = evaluate_objective(&ds, &s, &EvalConfig::new(k, TieMode::Pessimistic)).unwrap();
        prop_assert!((inner - core).abs() < 1e-9, "{} vs {}", inner, core);
        let model = build_pessimistic_mip(&ds, l, k, &PessimisticOptions::default()).unwrap();
        let values = pessimistic_certificate(&ds, &model, &s, k).unwrap();
        let obj = model.check_assignment(&values, 1e-9);
        prop_assert!(obj.is_ok(), "{:?}", obj);
        prop_assert!((obj.unwrap() - core).abs() < 1e-9);
    }

    #[test]
    fn relaxed_count_row_never_underestimates((ds, s, k) in with_selection()) {
        let bounds = vec![1e6; ds.n_points()];
        let relaxed = pessimistic_inner_optimum(&ds, &s, k, &bounds, KConstraint::Inequality).unwrap();
        let core = evaluate_objective(&ds, &s, &EvalConfig::new(k, TieMode::Pessimistic)).unwrap();
        prop_assert!(relaxed >= core - 1e-9);
    }

    #[test]
    fn lp_export_is_deterministic((ds, _s, k) in with_selection()) {
        let a = build_pessimistic_mip(&ds, 1, k, &PessimisticOptions::default()).unwrap();
        let b = build_pessimistic_mip(&ds, 1, k, &PessimisticOptions::default()).unwrap();
        prop_assert_eq!(to_lp_string(&a), to_lp_string(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn k_opt_never_beats_exact(seed in 0u64..10_000, n in 5usize..12, p in 3usize..8, l in 1usize..3) {
        let ds = fspeo_core::synthetic::generate_synthetic_dataset(n, p, 2, seed).unwrap();
        let cfg = EvalConfig::new(2.min(n - 1), TieMode::Pessimistic);
        let exact = exact_enumeration(&ds, l, &cfg).unwrap();
        let heur = k_opt_search(&ds, &KOptConfig::new(l, seed), &cfg).unwrap();
        prop_assert!(heur.best_objective >= exact.best_objective);
        // the result is a local optimum of the swap neighborhood
        for nb in swap_neighborhood(&heur.best_selection, p, 1) {
            prop_assert!(evaluate_objective(&ds, &nb, &cfg).unwrap() >= heur.best_objective);
        }
    }

    #[test]
    fn reduction_matches_prediction(
        u in 1usize..4,
        raw in prop::collection::vec(prop::collection::btree_set(0usize..4, 0..4), 1..4),
        budget in 1usize..3,
    ) {
        let mut subsets: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|s| s.into_iter().filter(|&e| e < u).collect())
            .collect();
        subsets.sort();
        subsets.dedup();
        let mc = MaxCoverageInstance::new(u, subsets, budget, u).unwrap();
        let r = reduce_max_coverage(&mc).unwrap();
        let m = mc.subsets.len();
        for size in 1..=budget.min(m) {
            for cover in Combinations::new(m, size) {
                let want = predicted_objective(&mc, &cover).unwrap();
                let s = FeatureSelection::new(cover).unwrap();
                for mode in [TieMode::Pessimistic, TieMode::Optimistic] {
                    let got = evaluate_objective(&r.dataset, &s, &EvalConfig::new(r.k, mode)).unwrap();
                    prop_assert!((got - want).abs() < 1e-9, "{:?} {:?}: {} vs {}", mc, s, got, want);
                }
            }
        }
    }
}
