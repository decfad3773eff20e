//! Problem files.
//!
//! ```toml
//! p = 2.0
//! n = 3
//!
//! [[factors]]
//! alphas = [0.0, 0.0, 0.0]
//! lambda = 0.0
//! k = 1
//!
//! [options]          # all optional
//! eps_case = 1e-9
//! h_rel = 1e-4
//! seed = 0
//! points = 100
//! mode = "paper"     # or "combined"
//! ```

use std::ops::Range;
use std::path::Path;

use itersing::characteristic::DEFAULT_EPS_CASE;
use itersing::numeric::FDConfig;
use itersing::{BasisMode, FactorSpec, ProblemSpec};
use serde::Deserialize;
use toml::Spanned;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    p: Spanned<f64>,
    n: Spanned<i64>,
    factors: Spanned<Vec<FactorDocument>>,
    #[serde(default)]
    options: OptionsDocument,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDocument {
    alphas: Spanned<Vec<f64>>,
    lambda: f64,
    k: Spanned<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsDocument {
    eps_case: Option<Spanned<f64>>,
    h_rel: Option<Spanned<f64>>,
    seed: Option<u64>,
    points: Option<usize>,
    mode: Option<Spanned<String>>,
}

/// Run settings that accompany a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub eps_case: f64,
    pub h_rel: f64,
    pub seed: u64,
    pub points: usize,
    pub mode: BasisMode,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            eps_case: DEFAULT_EPS_CASE,
            h_rel: FDConfig::default().h_rel,
            seed: 0,
            points: 100,
            mode: BasisMode::PaperLiteral,
        }
    }
}

impl RunOptions {
    pub fn fd_config(&self) -> FDConfig {
        FDConfig::with_h_rel(self.h_rel)
    }
}

#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub spec: ProblemSpec,
    pub options: RunOptions,
}

pub fn parse_mode(s: &str) -> Option<BasisMode> {
    match s {
        "paper" | "paper-literal" => Some(BasisMode::PaperLiteral),
        "combined" | "combined-multiplicity" => Some(BasisMode::CombinedMultiplicity),
        _ => None,
    }
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    let end = span.start.min(text.len());
    text[..end].matches('\n').count() + 1
}

pub fn parse_spec(text: &str) -> Result<LoadedSpec, CliError> {
    let doc: SpecDocument = toml::from_str(text).map_err(|e| CliError::Parse {
        line: e.span().map(|s| line_of(text, s)),
        message: e.message().to_string(),
    })?;
    let invalid = |span: Range<usize>, message: String| CliError::Validation {
        line: Some(line_of(text, span)),
        message,
    };

    let p = *doc.p.get_ref();
    if !(p.is_finite() && p > 0.0) {
        return Err(invalid(
            doc.p.span(),
            format!("p must be a finite positive real (got {p})"),
        ));
    }
    let n = *doc.n.get_ref();
    if n < 1 {
        return Err(invalid(doc.n.span(), format!("n must be a positive integer (got {n})")));
    }
    let n = n as usize;
    if doc.factors.get_ref().is_empty() {
        return Err(invalid(
            doc.factors.span(),
            "factors must contain at least one entry".into(),
        ));
    }
    let mut factors = Vec::new();
    for (j, f) in doc.factors.get_ref().iter().enumerate() {
        let k = *f.k.get_ref();
        if k < 1 || k > u32::MAX as i64 {
            return Err(invalid(
                f.k.span(),
                format!("factors[{j}].k must be a positive integer (got {k})"),
            ));
        }
        let alphas = f.alphas.get_ref();
        if alphas.len() != n {
            return Err(invalid(
                f.alphas.span(),
                format!("factors[{j}].alphas has {} entries but n = {n}", alphas.len()),
            ));
        }
        factors.push(FactorSpec::new(alphas.clone(), f.lambda, k as u32));
    }
    let spec = ProblemSpec::new(p, n, factors).map_err(|e| CliError::Validation {
        line: None,
        message: e.to_string(),
    })?;

    let mut options = RunOptions::default();
    let o = &doc.options;
    if let Some(eps) = &o.eps_case {
        if eps.get_ref().is_nan() || *eps.get_ref() < 0.0 {
            return Err(invalid(eps.span(), "options.eps_case must be nonnegative".into()));
        }
        options.eps_case = *eps.get_ref();
    }
    if let Some(h) = &o.h_rel {
        if h.get_ref().is_nan() || *h.get_ref() <= 0.0 {
            return Err(invalid(h.span(), "options.h_rel must be positive".into()));
        }
        options.h_rel = *h.get_ref();
    }
    if let Some(seed) = o.seed {
        options.seed = seed;
    }
    if let Some(points) = o.points {
        options.points = points;
    }
    if let Some(mode) = &o.mode {
        options.mode = parse_mode(mode.get_ref()).ok_or_else(|| {
            invalid(
                mode.span(),
                format!(
                    "options.mode must be \"paper\" or \"combined\" (got {:?})",
                    mode.get_ref()
                ),
            )
        })?;
    }
    Ok(LoadedSpec { spec, options })
}
