//! The log-power term algebra: finite sums `Σ c · r^m (ln r)^l` with complex
//! coefficients and exponents.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exponents closer than this on both real and imaginary parts are the same key.
pub const MERGE_TOL: f64 = 1e-12;

/// Coefficients below `PRUNE_REL · max |c|` are dropped on normalization.
pub const PRUNE_REL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPowerTerm {
    pub coeff: Complex64,
    pub m: Complex64,
    pub l: u32,
}

impl LogPowerTerm {
    pub fn new(coeff: Complex64, m: Complex64, l: u32) -> Self {
        LogPowerTerm { coeff, m, l }
    }

    /// A unit-coefficient real power `r^m (ln r)^l`.
    pub fn power(m: f64, l: u32) -> Self {
        LogPowerTerm::new(Complex64::new(1.0, 0.0), Complex64::new(m, 0.0), l)
    }

    pub fn same_key(&self, other: &LogPowerTerm) -> bool {
        self.l == other.l && (self.m.re - other.m.re).abs() <= MERGE_TOL && (self.m.im - other.m.im).abs() <= MERGE_TOL
    }

    /// Value at radius `r > 0`.
    pub fn eval(&self, r: f64) -> Complex64 {
        let ln_r = r.ln();
        let power = (self.m * ln_r).exp();
        self.coeff * power * ln_r.powi(self.l as i32)
    }
}

/// A normalized sum of log-power terms.
///
/// Every constructor and arithmetic operation returns a normalized value: one
/// term per `(m, l)` key, negligible coefficients pruned, terms sorted by
/// `(l, Re m, Im m)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LogPowerExpr {
    terms: Vec<LogPowerTerm>,
}

impl LogPowerExpr {
    pub fn zero() -> Self {
        LogPowerExpr { terms: Vec::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = LogPowerTerm>) -> Self {
        let mut merged: Vec<LogPowerTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|u| u.same_key(&t)) {
                Some(u) => u.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        let largest = merged.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
        let floor = PRUNE_REL * largest;
        merged.retain(|t| {
            let c = t.coeff.norm();
            c != 0.0 && c > floor
        });
        merged.sort_by(term_order);
        LogPowerExpr { terms: merged }
    }

    pub fn term(t: LogPowerTerm) -> Self {
        Self::from_terms([t])
    }

    pub fn terms(&self) -> &[LogPowerTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    pub fn max_log_power(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.l).max()
    }

    /// Coefficient of the `(m, l)` key, zero when absent.
    pub fn coeff_of(&self, m: Complex64, l: u32) -> Complex64 {
        let probe = LogPowerTerm::new(Complex64::new(0.0, 0.0), m, l);
        self.terms
            .iter()
            .find(|t| t.same_key(&probe))
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| LogPowerTerm {
            coeff: a * t.coeff,
            ..*t
        }))
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(r)).sum()
    }

    /// True when `self − other` has no coefficient above `tol · max(1, scale)`,
    /// with `scale` the largest coefficient of either side.
    pub fn approx_eq(&self, other: &LogPowerExpr, tol: f64) -> bool {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff()).max(1.0);
        let diff = raw_difference(self, other);
        diff.iter().all(|t| t.coeff.norm() <= tol * scale)
    }
}

// Difference without pruning, so approx_eq never hides a small discrepancy.
fn raw_difference(a: &LogPowerExpr, b: &LogPowerExpr) -> Vec<LogPowerTerm> {
    let mut merged: Vec<LogPowerTerm> = a.terms.clone();
    for t in &b.terms {
        match merged.iter_mut().find(|u| u.same_key(t)) {
            Some(u) => u.coeff -= t.coeff,
            None => merged.push(LogPowerTerm { coeff: -t.coeff, ..*t }),
        }
    }
    merged
}

fn term_order(a: &LogPowerTerm, b: &LogPowerTerm) -> Ordering {
    a.l.cmp(&b.l)
        .then(a.m.re.total_cmp(&b.m.re))
        .then(a.m.im.total_cmp(&b.m.im))
}

impl Add for &LogPowerExpr {
    type Output = LogPowerExpr;
    fn add(self, rhs: &LogPowerExpr) -> LogPowerExpr {
        LogPowerExpr::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Add for LogPowerExpr {
    type Output = LogPowerExpr;
    fn add(self, rhs: LogPowerExpr) -> LogPowerExpr {
        &self + &rhs
    }
}

impl Neg for &LogPowerExpr {
    type Output = LogPowerExpr;
    fn neg(self) -> LogPowerExpr {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for &LogPowerExpr {
    type Output = LogPowerExpr;
    fn sub(self, rhs: &LogPowerExpr) -> LogPowerExpr {
        self + &(-rhs)
    }
}

impl Mul<&LogPowerExpr> for Complex64 {
    type Output = LogPowerExpr;
    fn mul(self, rhs: &LogPowerExpr) -> LogPowerExpr {
        rhs.scale(self)
    }
}

impl FromIterator<LogPowerTerm> for LogPowerExpr {
    fn from_iter<I: IntoIterator<Item = LogPowerTerm>>(iter: I) -> Self {
        LogPowerExpr::from_terms(iter)
    }
}

impl std::fmt::Display for LogPowerExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:e}{:+e}i)·r^({:e}{:+e}i)", t.coeff.re, t.coeff.im, t.m.re, t.m.im)?;
            if t.l > 0 {
                write!(f, "·(ln r)^{}", t.l)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn merges_nearby_exponents() {
        let e = LogPowerExpr::from_terms([
            LogPowerTerm::new(c(1.0), c(2.0), 1),
            LogPowerTerm::new(c(2.0), c(2.0 + 5e-13), 1),
            LogPowerTerm::new(c(4.0), c(2.0), 0),
        ]);
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff_of(c(2.0), 1), c(3.0));
        assert_eq!(e.coeff_of(c(2.0), 0), c(4.0));
    }

    #[test]
    fn distinct_beyond_tolerance() {
        let e = LogPowerExpr::from_terms([
            LogPowerTerm::new(c(1.0), c(2.0), 0),
            LogPowerTerm::new(c(1.0), c(2.0 + 1e-9), 0),
        ]);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn cancellation_gives_zero() {
        let a = LogPowerExpr::term(LogPowerTerm::power(1.5, 2));
        assert!((&a - &a).is_zero());
        assert!(LogPowerExpr::zero().is_empty());
    }

    #[test]
    fn prunes_relative_to_largest() {
        let e = LogPowerExpr::from_terms([
            LogPowerTerm::new(c(1.0), c(0.0), 0),
            LogPowerTerm::new(c(1e-15), c(1.0), 0),
        ]);
        assert_eq!(e.len(), 1);
        // a lone tiny term survives: pruning is relative
        let e = LogPowerExpr::term(LogPowerTerm::new(c(1e-20), c(1.0), 0));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn canonical_order() {
        let e = LogPowerExpr::from_terms([
            LogPowerTerm::power(3.0, 1),
            LogPowerTerm::power(-1.0, 1),
            LogPowerTerm::power(5.0, 0),
        ]);
        let keys: Vec<(u32, f64)> = e.terms().iter().map(|t| (t.l, t.m.re)).collect();
        assert_eq!(keys, vec![(0, 5.0), (1, -1.0), (1, 3.0)]);
    }

    #[test]
    fn evaluates_complex_exponents() {
        // r^{2i} + r^{-2i} = 2 cos(2 ln r)
        let e = LogPowerExpr::from_terms([
            LogPowerTerm::new(c(1.0), Complex64::new(0.0, 2.0), 0),
            LogPowerTerm::new(c(1.0), Complex64::new(0.0, -2.0), 0),
        ]);
        let r = 1.7f64;
        let v = e.eval(r);
        assert!((v.re - 2.0 * (2.0 * r.ln()).cos()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn approx_eq_detects_differences() {
        let a = LogPowerExpr::term(LogPowerTerm::power(1.0, 0));
        let b = LogPowerExpr::term(LogPowerTerm::new(c(1.0 + 1e-12), c(1.0), 0));
        assert!(a.approx_eq(&b, 1e-10));
        assert!(!a.approx_eq(&b, 1e-13));
        let d = LogPowerExpr::term(LogPowerTerm::power(2.0, 0));
        assert!(!a.approx_eq(&d, 1e-3));
    }
}
