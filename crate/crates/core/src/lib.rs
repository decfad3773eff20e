//! Radial log-power solutions of iterated singular Euler-type equations
//!
//! ```text
//! (L_1^{k_1} L_2^{k_2} ... L_q^{k_q}) u = 0,
//! L_j = Σ_i (r/x_i)^p [x_i² ∂²/∂x_i² + α_i^{(j)} x_i ∂/∂x_i] + λ_j,   r^p = Σ_i x_i^p.
//! ```
//!
//! Each `L_j` maps `r^m` to `β_j(m) r^m` with `β_j(m) = m(m + 2φ_j) + λ_j`, so the
//! roots of `β_j` and their multiplicities determine a basis of functions
//! `r^m (ln r)^l` (realized as `cos`/`sin` of `ln r` for complex roots).
//!
//! The crate builds those bases ([`construct_solution_basis`],
//! [`euler_solution_basis`]) and checks them two ways:
//!
//! * exactly, by applying the operators in the log-power algebra
//!   ([`symbolic_annihilation_check`]);
//! * numerically, by applying the raw operator with central finite
//!   differences ([`numeric::hybrid_residual_check`]).

pub mod basis;
pub mod characteristic;
pub mod error;
pub mod expr;
pub mod numeric;
pub mod operator;
pub mod problem;
pub mod verify;

pub use basis::{
    construct_solution_basis, construct_solution_basis_with_mode, euler_solution_basis, realize_terms, BasisKind,
    BasisMode, RealBasisTerm, SolutionBasis,
};
pub use characteristic::{analyze_factor, beta, compute_phi, CaseClass, FactorAnalysis, DEFAULT_EPS_CASE};
pub use error::{Error, Result};
pub use expr::{LogPowerExpr, LogPowerTerm};
pub use operator::{apply_factor_symbolic, apply_iterated_symbolic};
pub use problem::{FactorSpec, ProblemSpec};
pub use verify::symbolic_annihilation_check;
