//! Exact rational linear algebra and linear feasibility.

pub mod lp;
pub mod matrix;
pub mod rat;

pub use lp::{feasible_point, is_bounded, Equality, Relation, StrictConstraint, StrictSystem};
pub use matrix::{
    rank, rank_mod_p, rank_of_rows, rref, solve_equations, AffineSubspace, EchelonBasis, RatMatrix,
    Rref,
};
pub use rat::{format_rat, parse_rat, rat, rat_frac, Rat};

use crate::error::{validation, Result};

/// Solves the equality part of `sys`; `None` when inconsistent.
pub fn solve_affine(sys: &StrictSystem) -> Result<Option<AffineSubspace>> {
    if !sys.strict().is_empty() {
        return Err(validation("solve_affine expects equalities only"));
    }
    let eqs: Vec<_> = sys
        .equalities()
        .iter()
        .map(|e| (e.coeffs.clone(), e.offset.clone()))
        .collect();
    Ok(solve_equations(sys.dim(), &eqs))
}
