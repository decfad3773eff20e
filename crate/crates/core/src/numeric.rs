//! Pointwise evaluation and finite-difference application of the raw operator.
//!
//! Everything here works on the open positive orthant: `x_i^p` and
//! `(r/x_i)^p` are only defined there for non-integer `p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{RealBasisTerm, SolutionBasis};
use crate::error::{Error, Result};
use crate::expr::LogPowerExpr;
use crate::operator::apply_plan;
use crate::problem::{FactorSpec, ProblemSpec};

/// Residual normalizers never drop below this.
pub const NORMALIZER_FLOOR: f64 = 1e-30;

/// Relative residual threshold of the hybrid check.
pub const NUMERIC_REL_TOL: f64 = 1e-4;

/// A point of the open positive orthant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Domain("a point needs at least one coordinate".into()));
        }
        if let Some((i, c)) = coords.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::Domain(format!(
                "coordinate {i} of {coords:?} is {c}; points must lie in the open positive orthant"
            )));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

/// `r = (Σ x_i^p)^{1/p}`.
pub fn radial(x: &Point, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Parameter(format!("p must be positive, got {p}")));
    }
    // scale by the largest coordinate so large p cannot overflow
    let top = x.0.iter().copied().fold(0.0, f64::max);
    let s: f64 = x.0.iter().map(|&c| (c / top).powf(p)).sum();
    Ok(top * s.powf(1.0 / p))
}

pub fn eval_basis_term(term: &RealBasisTerm, x: &Point, p: f64) -> Result<f64> {
    Ok(term.eval_at_radius(radial(x, p)?))
}

/// Real part of a log-power expression at `x`.
pub fn eval_expr(expr: &LogPowerExpr, x: &Point, p: f64) -> Result<f64> {
    Ok(expr.eval(radial(x, p)?).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FdScheme {
    /// Three-point central differences, second order.
    #[default]
    Central2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDConfig {
    /// Step relative to the coordinate: `h_i = h_rel · x_i`.
    pub h_rel: f64,
    pub scheme: FdScheme,
    /// Largest `Σ k_j` that [`apply_iterated_numeric`] will nest.
    pub max_numeric_order: u32,
    /// Pass threshold on relative residuals.
    pub rel_tol: f64,
}

impl Default for FDConfig {
    fn default() -> Self {
        FDConfig {
            h_rel: 1e-4,
            scheme: FdScheme::Central2,
            max_numeric_order: 2,
            rel_tol: NUMERIC_REL_TOL,
        }
    }
}

impl FDConfig {
    pub fn with_h_rel(h_rel: f64) -> Self {
        FDConfig {
            h_rel,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.h_rel > 0.0 && self.h_rel.is_finite()) {
            return Err(Error::Parameter(format!("h_rel must be positive, got {}", self.h_rel)));
        }
        Ok(())
    }
}

/// Operator value at a point together with its residual normalizer, the
/// largest absolute summand of the operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorEval {
    pub value: f64,
    pub normalizer: f64,
}

type PointFn<'a> = dyn Fn(&Point) -> Result<f64> + 'a;

/// `L f (x)` with central differences of step `h_rel · x_i` in each coordinate.
pub fn operator_eval(factor: &FactorSpec, p: f64, f: &PointFn<'_>, x: &Point, h_rel: f64) -> Result<OperatorEval> {
    if factor.alphas.len() != x.dim() {
        return Err(Error::Parameter(format!(
            "factor has {} coefficients but the point has dimension {}",
            factor.alphas.len(),
            x.dim()
        )));
    }
    let r = radial(x, p)?;
    let f0 = f(x)?;
    let mut value = factor.lambda * f0;
    let mut normalizer = value.abs();
    let mut shifted = x.0.clone();
    for (i, &alpha) in factor.alphas.iter().enumerate() {
        let xi = x.0[i];
        // exactly representable step
        let h = (xi + h_rel * xi) - xi;
        if xi - 2.0 * h <= 0.0 {
            return Err(Error::Domain(format!(
                "finite-difference step {h} leaves the positive orthant at coordinate {i} = {xi}"
            )));
        }
        shifted[i] = xi + h;
        let fp = f(&Point(shifted.clone()))?;
        shifted[i] = xi - h;
        let fm = f(&Point(shifted.clone()))?;
        shifted[i] = xi;
        let d1 = (fp - fm) / (2.0 * h);
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let weight = (r / xi).powf(p);
        let second = weight * xi * xi * d2;
        let first = weight * alpha * xi * d1;
        value += second + first;
        normalizer = normalizer.max(second.abs()).max(first.abs());
    }
    Ok(OperatorEval {
        value,
        normalizer: normalizer.max(NORMALIZER_FLOOR),
    })
}

pub fn apply_operator_numeric<F>(factor: &FactorSpec, p: f64, f: F, x: &Point, cfg: &FDConfig) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    cfg.validate()?;
    Ok(operator_eval(factor, p, &f, x, cfg.h_rel)?.value)
}

/// Nested finite-difference application of every factor, `k_j` times each,
/// first factor innermost.
///
/// With total order `d = Σ k_j > 1` each level uses the step `h_rel^{1/d}`:
/// roundoff in a `2d`-th order difference grows like `ε / h^{2d}`, and the
/// configured single-level step would swamp the result.
pub fn apply_iterated_numeric<F>(spec: &ProblemSpec, f: F, x: &Point, cfg: &FDConfig) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    cfg.validate()?;
    let order = spec.total_order();
    if order > cfg.max_numeric_order {
        return Err(Error::Capability(format!(
            "total operator order {order} exceeds the numeric cap {}; use the hybrid residual check",
            cfg.max_numeric_order
        )));
    }
    let ops: Vec<&FactorSpec> = spec
        .factors
        .iter()
        .flat_map(|fac| std::iter::repeat_n(fac, fac.k as usize))
        .collect();
    let h = if order <= 1 {
        cfg.h_rel
    } else {
        cfg.h_rel.powf(1.0 / order as f64)
    };
    nested(&ops, spec.p, &f, x, h)
}

fn nested(ops: &[&FactorSpec], p: f64, f: &PointFn<'_>, x: &Point, h: f64) -> Result<f64> {
    match ops.split_last() {
        None => f(x),
        Some((outer, inner)) => {
            let g = |y: &Point| nested(inner, p, f, y, h);
            Ok(operator_eval(outer, p, &g, x, h)?.value)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub point: Point,
    pub residual: f64,
    pub normalizer: f64,
    pub relative: f64,
}

/// Residual statistics of one function over a point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub term_index: usize,
    pub per_point: Vec<PointResidual>,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub passed: bool,
}

impl ResidualReport {
    fn from_points(term_index: usize, per_point: Vec<PointResidual>, threshold: f64) -> Self {
        let max_rel = per_point.iter().map(|r| r.relative).fold(0.0, f64::max);
        let mean_rel = if per_point.is_empty() {
            0.0
        } else {
            per_point.iter().map(|r| r.relative).sum::<f64>() / per_point.len() as f64
        };
        ResidualReport {
            term_index,
            per_point,
            max_rel,
            mean_rel,
            passed: max_rel <= threshold,
        }
    }
}

/// Splits the full operator into an exact prefix and one numeric application.
///
/// Single applications run in factor order with the term's own factor last.
/// The exact stage stops at the last nonzero intermediate `g`; the factor that
/// comes next is returned for numeric application. Every later application
/// acts on `L g`, so `L g = 0` implies the whole product annihilates the term.
fn hybrid_split(spec: &ProblemSpec, term: &RealBasisTerm) -> (LogPowerExpr, usize) {
    let own = if term.factor_index < spec.q() {
        term.factor_index
    } else {
        spec.q() - 1
    };
    let steps: Vec<usize> = (0..spec.q())
        .filter(|&j| j != own)
        .chain(std::iter::once(own))
        .flat_map(|j| std::iter::repeat_n(j, spec.factors[j].k as usize))
        .collect();
    let mut g = term.lift();
    let (&last, prefix) = steps.split_last().expect("validated specs have a factor");
    for &j in prefix {
        let next = apply_plan(spec, &[(j, 1)], &g);
        if next.is_zero() {
            return (g, j);
        }
        g = next;
    }
    (g, last)
}

/// Hybrid check of a single term: the exact prefix from the log-power algebra,
/// then one finite-difference application, so numeric differentiation stays
/// at second order for any `Σ k_j`.
pub fn hybrid_term_residual(
    spec: &ProblemSpec,
    term: &RealBasisTerm,
    term_index: usize,
    points: &[Point],
    cfg: &FDConfig,
) -> Result<ResidualReport> {
    cfg.validate()?;
    let (partial, numeric_factor) = hybrid_split(spec, term);
    let g = |y: &Point| eval_expr(&partial, y, spec.p);
    let per_point = points
        .iter()
        .map(|x| {
            let ev = operator_eval(&spec.factors[numeric_factor], spec.p, &g, x, cfg.h_rel)?;
            let relative = ev.value.abs() / ev.normalizer;
            Ok(PointResidual {
                point: x.clone(),
                residual: ev.value,
                normalizer: ev.normalizer,
                relative,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_points(term_index, per_point, cfg.rel_tol))
}

/// One report per basis term, in basis order.
pub fn hybrid_residual_check(
    spec: &ProblemSpec,
    basis: &SolutionBasis,
    points: &[Point],
    cfg: &FDConfig,
) -> Result<Vec<ResidualReport>> {
    basis
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| hybrid_term_residual(spec, t, i, points, cfg))
        .collect()
}

/// `count` points drawn uniformly from `[lo, hi]^n`.
pub fn sample_points(n: usize, count: usize, seed: u64, lo: f64, hi: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Point((0..n).map(|_| rng.gen_range(lo..=hi)).collect()))
        .collect()
}

/// The default verification cloud, `[0.5, 2]^n`.
pub fn default_points(n: usize, count: usize, seed: u64) -> Vec<Point> {
    sample_points(n, count, seed, 0.5, 2.0)
}
