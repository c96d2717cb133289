//! MIP formulations of both objective variants as a solver-agnostic model.
//!
//! Indices in variable names are 0-based; `f` is a feature, `i`, `j` are
//! distinct points.
//!
//! **Optimistic model** ([`build_optimistic_mip`]):
//! `b_f` (binary, p), `y_i_j` (binary, N(N-1)), `d_i_j >= 0` (N(N-1)),
//! `eps_i >= 0` (N). Rows, in this order: `k_neighbors_i` (N),
//! `L_features_lb`, `L_features_ub` (2), then per ordered pair
//! `instance_diff_i_j`, `nb1_i_j`, `nb2_i_j` — `3N(N-1) + N + 2` rows.
//!
//! **Pessimistic model** ([`build_pessimistic_mip`]): the per-point
//! evaluation LP dualized into the outer problem. Variables `b_f`,
//! `alpha_i` and `beta_i_j` in `[0, U_i]`, `gamma_i` (free, or `>= 0` with
//! [`KConstraint::Inequality`]), `delta_i_j >= 0`, and the products
//! `za_f_i = b_f alpha_i`, `zb_f_i_j = b_f beta_i_j` (`pN + pN(N-1)` of
//! them). The instance distances are substituted directly, so no `d_i_j`
//! variables exist. Rows: `L_features_lb/ub` (2), `b_cons_i_j` (N(N-1)),
//! `alpha_bound_i` (N), `beta_bound_i_j` (N(N-1)) and three envelope rows
//! per product — `2 + N + 2N(N-1) + 3(pN + pN(N-1))` rows.

mod bounds;
mod crosscheck;
mod lp;
mod model;
mod optimistic;
mod pessimistic;
mod verify;

pub use bounds::{alpha_star, compute_alpha_bounds, compute_big_m, enumerated_alpha_bounds};
pub use crosscheck::{crosscheck_solution, CrosscheckReport, CROSSCHECK_TOLERANCE};
pub use lp::{parse_solution, selection_from_solution, to_lp_string, SolutionValues};
pub use model::{Constraint, Formulation, MipModel, ModelMetadata, Sense, VarKind, Variable};
pub use optimistic::{build_optimistic_mip, optimistic_certificate};
pub use pessimistic::{build_pessimistic_mip, pessimistic_certificate, AlphaBoundRule, KConstraint, PessimisticOptions};
pub use verify::{inner_point_optimum, pessimistic_inner_optimum};

use alloc::format;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

fn check_parameters(ds: &Dataset, max_features: usize, k: usize) -> Result<()> {
    let n = ds.n_points();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    if max_features == 0 || max_features > ds.n_features() {
        return Err(Error::InvalidParameter(format!(
            "L={max_features} must lie in 1..={}",
            ds.n_features()
        )));
    }
    Ok(())
}
