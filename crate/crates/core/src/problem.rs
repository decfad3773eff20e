//! Parameterization of the iterated operator `L_1^{k_1} L_2^{k_2} ... L_q^{k_q}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One operator factor `L_j` raised to the power `k`.
///
/// `L_j u = Σ_i (r/x_i)^p [x_i² ∂²u/∂x_i² + α_i x_i ∂u/∂x_i] + λ u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub alphas: Vec<f64>,
    pub lambda: f64,
    pub k: u32,
}

impl FactorSpec {
    pub fn new(alphas: Vec<f64>, lambda: f64, k: u32) -> Self {
        FactorSpec { alphas, lambda, k }
    }
}

/// The full problem: exponent `p` of the radial variable, dimension `n` and
/// the ordered list of factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub p: f64,
    pub n: usize,
    pub factors: Vec<FactorSpec>,
}

impl ProblemSpec {
    /// Builds and validates a problem.
    pub fn new(p: f64, n: usize, factors: Vec<FactorSpec>) -> Result<Self> {
        let spec = ProblemSpec { p, n, factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::Parameter(format!(
                "p must be a finite positive real, got {}",
                self.p
            )));
        }
        if self.n == 0 {
            return Err(Error::Parameter("n must be at least 1".into()));
        }
        if self.factors.is_empty() {
            return Err(Error::Parameter("at least one factor is required".into()));
        }
        for (j, f) in self.factors.iter().enumerate() {
            if f.alphas.len() != self.n {
                return Err(Error::Parameter(format!(
                    "factors[{j}].alphas has length {} but n = {}",
                    f.alphas.len(),
                    self.n
                )));
            }
            if f.k == 0 {
                return Err(Error::Parameter(format!("factors[{j}].k must be at least 1")));
            }
            if !f.lambda.is_finite() || f.alphas.iter().any(|a| !a.is_finite()) {
                return Err(Error::Parameter(format!("factors[{j}] has non-finite coefficients")));
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.factors.len()
    }

    /// Σ_j k_j, the number of operator applications in the product.
    pub fn total_order(&self) -> u32 {
        self.factors.iter().map(|f| f.k).sum()
    }

    /// `φ_j` for every factor, in order.
    pub fn phis(&self) -> Vec<f64> {
        self.factors
            .iter()
            .map(|f| crate::characteristic::phi_unchecked(f, self.p, self.n))
            .collect()
    }
}
