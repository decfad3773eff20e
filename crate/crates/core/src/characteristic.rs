//! Characteristic quantities of a single factor: `φ`, the quadratic
//! `β(m) = m(m + 2φ) + λ`, its roots and the I1/I2/I3 classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::MERGE_TOL;
use crate::problem::FactorSpec;

/// Relative scale of the classification band around `φ² − λ = 0`.
pub const DEFAULT_EPS_CASE: f64 = 1e-9;

/// `φ = (−p + n(p − 1) + Σ α_i) / 2`.
pub fn compute_phi(factor: &FactorSpec, p: f64, n: usize) -> Result<f64> {
    if factor.alphas.len() != n {
        return Err(Error::Parameter(format!(
            "alphas has length {} but n = {n}",
            factor.alphas.len()
        )));
    }
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Parameter(format!("p must be positive, got {p}")));
    }
    Ok(phi_unchecked(factor, p, n))
}

pub(crate) fn phi_unchecked(factor: &FactorSpec, p: f64, n: usize) -> f64 {
    let alpha_sum: f64 = factor.alphas.iter().sum();
    (-p + n as f64 * (p - 1.0) + alpha_sum) / 2.0
}

/// `β(m) = m(m + 2φ) + λ`.
pub fn beta(phi: f64, lambda: f64, m: Complex64) -> Complex64 {
    m * (m + 2.0 * phi) + lambda
}

/// Which of the three index sets a factor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseClass {
    /// Two distinct real roots.
    I1,
    /// A complex-conjugate pair.
    I2,
    /// A double real root `−φ`.
    I3,
}

impl std::fmt::Display for CaseClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseClass::I1 => "I1",
            CaseClass::I2 => "I2",
            CaseClass::I3 => "I3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorAnalysis {
    pub phi: f64,
    pub lambda: f64,
    /// `φ² − λ`.
    pub disc: f64,
    pub case_class: CaseClass,
    /// `(m⁽¹⁾, m⁽²⁾)` with `m⁽¹⁾ = −φ + √disc` (upper half plane when complex).
    pub roots: (Complex64, Complex64),
}

impl FactorAnalysis {
    /// `√|disc|`: the real offset for I1, the frequency for I2, zero for an
    /// exact double root.
    pub fn root_offset(&self) -> f64 {
        self.disc.abs().sqrt()
    }
}

/// Width of the I3 band: `eps_case · max(1, φ², |λ|)`.
pub fn case_band(phi: f64, lambda: f64, eps_case: f64) -> f64 {
    eps_case * 1f64.max(phi * phi).max(lambda.abs())
}

pub fn analyze_factor(factor: &FactorSpec, p: f64, n: usize, eps_case: f64) -> Result<FactorAnalysis> {
    let phi = compute_phi(factor, p, n)?;
    Ok(analyze_phi_lambda(phi, factor.lambda, eps_case))
}

pub(crate) fn analyze_phi_lambda(phi: f64, lambda: f64, eps_case: f64) -> FactorAnalysis {
    let disc = phi * phi - lambda;
    let band = case_band(phi, lambda, eps_case);
    let case_class = if disc > band {
        CaseClass::I1
    } else if disc < -band {
        CaseClass::I2
    } else {
        CaseClass::I3
    };
    FactorAnalysis {
        phi,
        lambda,
        disc,
        case_class,
        roots: quadratic_roots(phi, lambda),
    }
}

/// Roots of `m² + 2φm + λ`, avoiding cancellation in the smaller real root.
pub(crate) fn quadratic_roots(phi: f64, lambda: f64) -> (Complex64, Complex64) {
    let disc = phi * phi - lambda;
    if disc < 0.0 {
        let omega = (-disc).sqrt();
        return (Complex64::new(-phi, omega), Complex64::new(-phi, -omega));
    }
    if disc == 0.0 {
        return (Complex64::new(-phi, 0.0), Complex64::new(-phi, 0.0));
    }
    let s = disc.sqrt();
    let (upper, lower) = if phi >= 0.0 {
        let lower = -phi - s;
        (lambda / lower, lower)
    } else {
        let upper = -phi + s;
        (upper, lambda / upper)
    };
    (Complex64::new(upper, 0.0), Complex64::new(lower, 0.0))
}

/// `β` in factored form `(m − m⁽¹⁾)(m − m⁽²⁾)`.
///
/// A difference `m − m⁽ⁱ⁾` within [`MERGE_TOL`] on both parts is taken as zero,
/// so exponents that the term algebra identifies with a root are annihilated
/// exactly.
#[derive(Debug, Clone, Copy)]
pub struct Characteristic {
    roots: (Complex64, Complex64),
}

impl Characteristic {
    pub fn new(phi: f64, lambda: f64) -> Self {
        Characteristic {
            roots: quadratic_roots(phi, lambda),
        }
    }

    pub fn roots(&self) -> (Complex64, Complex64) {
        self.roots
    }

    fn offset(m: Complex64, root: Complex64) -> Complex64 {
        let d = m - root;
        if d.re.abs() <= MERGE_TOL && d.im.abs() <= MERGE_TOL {
            Complex64::new(0.0, 0.0)
        } else {
            d
        }
    }

    /// `(β(m), β'(m))`.
    pub fn eval(&self, m: Complex64) -> (Complex64, Complex64) {
        let d1 = Self::offset(m, self.roots.0);
        let d2 = Self::offset(m, self.roots.1);
        (d1 * d2, d1 + d2)
    }
}
