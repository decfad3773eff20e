//! Real-valued radial solution bases.
//!
//! For each factor `v` with `φ_v` and `disc_v = φ_v² − λ_v` the basis holds
//!
//! * I1: `r^(−φ_v ± √disc_v) (ln r)^l`, `l < k_v`
//! * I2: `r^(−φ_v) cos(ω_v ln r) (ln r)^l` and the `sin` analogue, `ω_v = √(−disc_v)`, `l < k_v`
//! * I3: `r^(−φ_v) (ln r)^l`, `l < 2 k_v`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characteristic::{analyze_factor, CaseClass, FactorAnalysis};
use crate::error::{Error, Result};
use crate::expr::{LogPowerExpr, LogPowerTerm, MERGE_TOL};
use crate::problem::{FactorSpec, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    PowerLog,
    CosLog,
    SinLog,
}

/// One basis function of radial log-power type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealBasisTerm {
    pub kind: BasisKind,
    /// `φ_v` of the producing factor; the oscillatory prefactor is `r^(−φ_v)`.
    pub phi: f64,
    /// Signed offset `exponent + φ_v` for `PowerLog`, frequency `ω_v` otherwise.
    pub mu: f64,
    /// Real exponent of the power prefactor.
    pub exponent: f64,
    pub l: u32,
    pub factor_index: usize,
}

impl RealBasisTerm {
    pub fn power_log(exponent: f64, phi: f64, l: u32, factor_index: usize) -> Self {
        RealBasisTerm {
            kind: BasisKind::PowerLog,
            phi,
            mu: exponent + phi,
            exponent,
            l,
            factor_index,
        }
    }

    fn oscillatory(kind: BasisKind, phi: f64, omega: f64, l: u32, factor_index: usize) -> Self {
        RealBasisTerm {
            kind,
            phi,
            mu: omega,
            exponent: -phi,
            l,
            factor_index,
        }
    }

    /// Frequency of the oscillatory part, zero for `PowerLog`.
    pub fn frequency(&self) -> f64 {
        match self.kind {
            BasisKind::PowerLog => 0.0,
            BasisKind::CosLog | BasisKind::SinLog => self.mu,
        }
    }

    /// Value at radius `r > 0`.
    pub fn eval_at_radius(&self, r: f64) -> f64 {
        let ln_r = r.ln();
        let base = r.powf(self.exponent) * ln_r.powi(self.l as i32);
        match self.kind {
            BasisKind::PowerLog => base,
            BasisKind::CosLog => base * (self.mu * ln_r).cos(),
            BasisKind::SinLog => base * (self.mu * ln_r).sin(),
        }
    }

    /// The term as a complex log-power expression.
    ///
    /// `cos(ω ln r) = (r^{iω} + r^{−iω}) / 2`, `sin(ω ln r) = (r^{iω} − r^{−iω}) / 2i`.
    pub fn lift(&self) -> LogPowerExpr {
        match self.kind {
            BasisKind::PowerLog => LogPowerExpr::term(LogPowerTerm::power(self.exponent, self.l)),
            BasisKind::CosLog | BasisKind::SinLog => {
                let (up, down) = self.conjugate_parts();
                &up + &down
            }
        }
    }

    /// For oscillatory terms, the two complex pieces whose sum is [`Self::lift`].
    pub fn conjugate_parts(&self) -> (LogPowerExpr, LogPowerExpr) {
        let upper = Complex64::new(self.exponent, self.mu);
        let lower = upper.conj();
        let (cu, cl) = match self.kind {
            BasisKind::SinLog => (Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5)),
            _ => (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)),
        };
        (
            LogPowerExpr::term(LogPowerTerm::new(cu, upper, self.l)),
            LogPowerExpr::term(LogPowerTerm::new(cl, lower, self.l)),
        )
    }

    /// Canonical text form in the variable `var`, numbers at six significant
    /// digits, e.g. `r^(-1) * (ln r)^2` or `cos(2 ln x)`.
    pub fn render(&self, var: &str) -> String {
        let mut parts = Vec::new();
        let e = sig6(self.exponent);
        if e != 0.0 {
            parts.push(format!("{var}^({})", fmt_num(e)));
        }
        match self.kind {
            BasisKind::PowerLog => {}
            BasisKind::CosLog => parts.push(format!("cos({} ln {var})", fmt_num(sig6(self.mu)))),
            BasisKind::SinLog => parts.push(format!("sin({} ln {var})", fmt_num(sig6(self.mu)))),
        }
        match self.l {
            0 => {}
            1 => parts.push(format!("ln {var}")),
            l => parts.push(format!("(ln {var})^{l}")),
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// Six-significant-digit rendering used by all human-readable output.
pub fn format_number(v: f64) -> String {
    fmt_num(sig6(v))
}

fn sig6(v: f64) -> f64 {
    let rounded: f64 = format!("{v:.5e}").parse().unwrap_or(v);
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// How log multiplicities are assigned when distinct factors share a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisMode {
    /// Each factor contributes its own terms independently.
    #[default]
    PaperLiteral,
    /// Multiplicities of each distinct root are summed over all factors.
    CombinedMultiplicity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionBasis {
    pub terms: Vec<RealBasisTerm>,
    pub spec: ProblemSpec,
}

impl SolutionBasis {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Name of the independent variable: `x` for the one-dimensional Euler case.
    pub fn variable(&self) -> &'static str {
        if self.spec.n == 1 {
            "x"
        } else {
            "r"
        }
    }

    /// `Σ c_i b_i(r)`. Missing coefficients default to one.
    pub fn combine_at_radius(&self, coeffs: Option<&[f64]>, r: f64) -> Result<f64> {
        if let Some(c) = coeffs {
            if c.len() != self.terms.len() {
                return Err(Error::Parameter(format!(
                    "{} coefficients given for a basis of {} terms",
                    c.len(),
                    self.terms.len()
                )));
            }
        }
        Ok(self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| coeffs.map_or(1.0, |c| c[i]) * t.eval_at_radius(r))
            .sum())
    }
}

/// Real basis terms contributed by one factor with iteration count `k`.
pub fn realize_terms(analysis: &FactorAnalysis, k: u32, factor_index: usize) -> Vec<RealBasisTerm> {
    let phi = analysis.phi;
    let mut out = Vec::new();
    match analysis.case_class {
        CaseClass::I1 => {
            let (upper, lower) = analysis.roots;
            for l in 0..k {
                out.push(RealBasisTerm::power_log(upper.re, phi, l, factor_index));
                out.push(RealBasisTerm::power_log(lower.re, phi, l, factor_index));
            }
        }
        CaseClass::I2 => {
            let omega = analysis.roots.0.im;
            for l in 0..k {
                out.push(RealBasisTerm::oscillatory(
                    BasisKind::CosLog,
                    phi,
                    omega,
                    l,
                    factor_index,
                ));
                out.push(RealBasisTerm::oscillatory(
                    BasisKind::SinLog,
                    phi,
                    omega,
                    l,
                    factor_index,
                ));
            }
        }
        CaseClass::I3 => {
            for l in 0..2 * k {
                out.push(RealBasisTerm::power_log(-phi, phi, l, factor_index));
            }
        }
    }
    out
}

pub fn construct_solution_basis(spec: &ProblemSpec, eps_case: f64) -> Result<SolutionBasis> {
    construct_solution_basis_with_mode(spec, eps_case, BasisMode::PaperLiteral)
}

pub fn construct_solution_basis_with_mode(spec: &ProblemSpec, eps_case: f64, mode: BasisMode) -> Result<SolutionBasis> {
    spec.validate()?;
    let analyses = spec
        .factors
        .iter()
        .map(|f| analyze_factor(f, spec.p, spec.n, eps_case))
        .collect::<Result<Vec<_>>>()?;
    let terms = match mode {
        BasisMode::PaperLiteral => analyses
            .iter()
            .zip(&spec.factors)
            .enumerate()
            .flat_map(|(v, (a, f))| realize_terms(a, f.k, v))
            .collect(),
        BasisMode::CombinedMultiplicity => combined_terms(&analyses, &spec.factors),
    };
    Ok(SolutionBasis {
        terms,
        spec: spec.clone(),
    })
}

struct RootGroup {
    // upper-half-plane representative
    root: Complex64,
    multiplicity: u32,
    phi: f64,
    factor_index: usize,
}

fn combined_terms(analyses: &[FactorAnalysis], factors: &[FactorSpec]) -> Vec<RealBasisTerm> {
    let mut groups: Vec<RootGroup> = Vec::new();
    let mut add = |root: Complex64, mult: u32, phi: f64, v: usize| {
        let found = groups
            .iter_mut()
            .find(|g| (g.root.re - root.re).abs() <= MERGE_TOL && (g.root.im - root.im).abs() <= MERGE_TOL);
        match found {
            Some(g) => g.multiplicity += mult,
            None => groups.push(RootGroup {
                root,
                multiplicity: mult,
                phi,
                factor_index: v,
            }),
        }
    };
    for (v, (a, f)) in analyses.iter().zip(factors).enumerate() {
        match a.case_class {
            CaseClass::I1 => {
                add(Complex64::new(a.roots.0.re, 0.0), f.k, a.phi, v);
                add(Complex64::new(a.roots.1.re, 0.0), f.k, a.phi, v);
            }
            CaseClass::I2 => add(a.roots.0, f.k, a.phi, v),
            CaseClass::I3 => add(Complex64::new(-a.phi, 0.0), 2 * f.k, a.phi, v),
        }
    }
    let mut out = Vec::new();
    for g in &groups {
        for l in 0..g.multiplicity {
            if g.root.im == 0.0 {
                out.push(RealBasisTerm::power_log(g.root.re, g.phi, l, g.factor_index));
            } else {
                // exponent −φ of the first factor; equal to g.root.re within MERGE_TOL
                out.push(RealBasisTerm::oscillatory(
                    BasisKind::CosLog,
                    g.phi,
                    g.root.im,
                    l,
                    g.factor_index,
                ));
                out.push(RealBasisTerm::oscillatory(
                    BasisKind::SinLog,
                    g.phi,
                    g.root.im,
                    l,
                    g.factor_index,
                ));
            }
        }
    }
    out
}

/// Basis for the iterated one-dimensional Euler equation
/// `∏ (x² d²/dx² + α_v x d/dx + λ_v)^{k_v} u = 0`.
pub fn euler_solution_basis(alphas: &[f64], lambdas: &[f64], ks: &[u32], eps_case: f64) -> Result<SolutionBasis> {
    if alphas.len() != lambdas.len() || alphas.len() != ks.len() {
        return Err(Error::Parameter(format!(
            "alphas, lambdas and ks must have equal length (got {}, {}, {})",
            alphas.len(),
            lambdas.len(),
            ks.len()
        )));
    }
    let factors = alphas
        .iter()
        .zip(lambdas)
        .zip(ks)
        .map(|((&a, &lambda), &k)| FactorSpec::new(vec![a], lambda, k))
        .collect();
    let spec = ProblemSpec::new(1.0, 1, factors)?;
    construct_solution_basis(&spec, eps_case)
}
