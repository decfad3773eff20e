//! Exact annihilation check of basis terms in the log-power algebra.

use crate::basis::{RealBasisTerm, SolutionBasis};
use crate::expr::LogPowerExpr;
use crate::operator::apply_iterated_symbolic;
use crate::problem::ProblemSpec;

/// Largest surviving coefficient allowed for a term to count as annihilated.
pub const SYMBOLIC_TOL: f64 = 1e-9;

/// Image of one basis term under the full iterated operator.
pub fn annihilation_residual(spec: &ProblemSpec, term: &RealBasisTerm) -> LogPowerExpr {
    apply_iterated_symbolic(spec, &term.lift())
}

/// Residual expression for every term of `basis`, in basis order.
pub fn symbolic_annihilation_check(spec: &ProblemSpec, basis: &SolutionBasis) -> Vec<LogPowerExpr> {
    basis.terms.iter().map(|t| annihilation_residual(spec, t)).collect()
}

pub fn passes(residual: &LogPowerExpr, tol: f64) -> bool {
    residual.max_abs_coeff() <= tol
}
