//! Exact action of the factors on the log-power algebra.
//!
//! Differentiating `L(r^m) = β(m) r^m` in `m` gives, since `β` is quadratic,
//!
//! ```text
//! L(r^m (ln r)^l) = β(m) r^m (ln r)^l + l β'(m) r^m (ln r)^(l-1) + l(l-1) r^m (ln r)^(l-2)
//! ```

use num_complex::Complex64;

use crate::characteristic::{phi_unchecked, Characteristic};
use crate::expr::{LogPowerExpr, LogPowerTerm};
use crate::problem::{FactorSpec, ProblemSpec};

/// Image of `expr` under `L_j`, where `phi` is the factor's `φ_j`.
pub fn apply_factor_symbolic(factor: &FactorSpec, phi: f64, expr: &LogPowerExpr) -> LogPowerExpr {
    apply_characteristic(&Characteristic::new(phi, factor.lambda), expr)
}

pub(crate) fn apply_characteristic(ch: &Characteristic, expr: &LogPowerExpr) -> LogPowerExpr {
    let mut out = Vec::with_capacity(3 * expr.len());
    for t in expr.terms() {
        let (b, db) = ch.eval(t.m);
        out.push(LogPowerTerm::new(t.coeff * b, t.m, t.l));
        if t.l >= 1 {
            let l = t.l as f64;
            out.push(LogPowerTerm::new(t.coeff * db * l, t.m, t.l - 1));
        }
        if t.l >= 2 {
            let l = t.l as f64;
            out.push(LogPowerTerm::new(
                t.coeff * Complex64::new(l * (l - 1.0), 0.0),
                t.m,
                t.l - 2,
            ));
        }
    }
    LogPowerExpr::from_terms(out)
}

/// Applies every factor `k_j` times, in factor order.
pub fn apply_iterated_symbolic(spec: &ProblemSpec, expr: &LogPowerExpr) -> LogPowerExpr {
    let plan: Vec<(usize, u32)> = spec.factors.iter().enumerate().map(|(j, f)| (j, f.k)).collect();
    apply_plan(spec, &plan, expr)
}

/// Applies `(factor index, repetitions)` steps in the given order.
pub fn apply_plan(spec: &ProblemSpec, plan: &[(usize, u32)], expr: &LogPowerExpr) -> LogPowerExpr {
    let mut acc = expr.clone();
    for &(j, times) in plan {
        let factor = &spec.factors[j];
        let ch = Characteristic::new(phi_unchecked(factor, spec.p, spec.n), factor.lambda);
        for _ in 0..times {
            if acc.is_zero() {
                return acc;
            }
            acc = apply_characteristic(&ch, &acc);
        }
    }
    acc
}
