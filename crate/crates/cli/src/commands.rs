use std::io::Write;

use itersing::basis::format_number;
use itersing::numeric::{default_points, hybrid_term_residual, radial, Point, ResidualReport};
use itersing::verify::{annihilation_residual, passes, SYMBOLIC_TOL};
use itersing::{
    analyze_factor, construct_solution_basis_with_mode, BasisKind, BasisMode, CaseClass, RealBasisTerm, SolutionBasis,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spec_file::LoadedSpec;
use crate::{CliError, Status};

fn mode_name(mode: BasisMode) -> &'static str {
    match mode {
        BasisMode::PaperLiteral => "paper-literal",
        BasisMode::CombinedMultiplicity => "combined-multiplicity",
    }
}

fn format_complex(z: Complex64) -> String {
    let im = format_number(z.im);
    if im == "0" {
        format_number(z.re)
    } else if format_number(z.re) == "0" {
        format!("{im}i")
    } else if z.im < 0.0 {
        format!("{}{im}i", format_number(z.re))
    } else {
        format!("{}+{im}i", format_number(z.re))
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RootRow {
    pub factor: usize,
    pub phi: f64,
    pub disc: f64,
    pub class: CaseClass,
    pub root1: [f64; 2],
    pub root2: [f64; 2],
}

pub fn roots(loaded: &LoadedSpec, json: bool, out: &mut dyn Write) -> Result<Status, CliError> {
    let spec = &loaded.spec;
    let mut rows = Vec::new();
    for (j, f) in spec.factors.iter().enumerate() {
        let a = analyze_factor(f, spec.p, spec.n, loaded.options.eps_case)?;
        rows.push(RootRow {
            factor: j,
            phi: a.phi,
            disc: a.disc,
            class: a.case_class,
            root1: [a.roots.0.re, a.roots.0.im],
            root2: [a.roots.1.re, a.roots.1.im],
        });
    }
    if json {
        write_json(out, &rows)?;
    } else {
        for r in &rows {
            writeln!(
                out,
                "factor {}: φ={} disc={} {} roots {}, {}",
                r.factor,
                format_number(r.phi),
                format_number(r.disc),
                r.class,
                format_complex(Complex64::new(r.root1[0], r.root1[1])),
                format_complex(Complex64::new(r.root2[0], r.root2[1])),
            )?;
        }
    }
    Ok(Status::Success)
}

/// Machine-readable basis term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub index: usize,
    pub label: String,
    pub kind: BasisKind,
    pub exponent: f64,
    pub frequency: f64,
    pub log_power: u32,
    pub phi: f64,
    pub mu: f64,
    pub factor_index: usize,
}

impl TermRecord {
    fn new(index: usize, t: &RealBasisTerm, var: &str) -> Self {
        TermRecord {
            index,
            label: t.render(var),
            kind: t.kind,
            exponent: t.exponent,
            frequency: t.frequency(),
            log_power: t.l,
            phi: t.phi,
            mu: t.mu,
            factor_index: t.factor_index,
        }
    }

    pub fn to_term(&self) -> RealBasisTerm {
        RealBasisTerm {
            kind: self.kind,
            phi: self.phi,
            mu: self.mu,
            exponent: self.exponent,
            l: self.log_power,
            factor_index: self.factor_index,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub variable: String,
    pub mode: String,
    pub count: usize,
    pub terms: Vec<TermRecord>,
}

fn basis_for(loaded: &LoadedSpec, mode: BasisMode) -> Result<SolutionBasis, CliError> {
    Ok(construct_solution_basis_with_mode(
        &loaded.spec,
        loaded.options.eps_case,
        mode,
    )?)
}

pub fn solve(loaded: &LoadedSpec, mode: BasisMode, json: bool, out: &mut dyn Write) -> Result<Status, CliError> {
    let basis = basis_for(loaded, mode)?;
    let var = basis.variable();
    let report = SolveReport {
        variable: var.to_string(),
        mode: mode_name(mode).to_string(),
        count: basis.len(),
        terms: basis
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| TermRecord::new(i, t, var))
            .collect(),
    };
    if json {
        write_json(out, &report)?;
    } else {
        for t in &report.terms {
            writeln!(out, "{}", t.label)?;
        }
        writeln!(out, "terms: {}", report.count)?;
    }
    Ok(Status::Success)
}

#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub mode: BasisMode,
    pub points: usize,
    pub seed: u64,
    pub h_rel: f64,
    /// Extra `r^e` term appended to the basis, for exercising the failure path.
    pub inject_exponent: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermVerification {
    pub index: usize,
    pub label: String,
    pub injected: bool,
    pub symbolic_max_coeff: f64,
    pub symbolic_passed: bool,
    pub numeric: Option<ResidualReport>,
    pub passed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: String,
    pub symbolic_tol: f64,
    pub numeric_tol: f64,
    pub points: usize,
    pub seed: u64,
    pub h_rel: f64,
    pub numeric_skipped: bool,
    pub terms: Vec<TermVerification>,
    pub passed: bool,
}

pub fn verify_report(loaded: &LoadedSpec, settings: &VerifySettings) -> Result<VerifyReport, CliError> {
    let spec = &loaded.spec;
    let mut basis = basis_for(loaded, settings.mode)?;
    let genuine = basis.len();
    if let Some(e) = settings.inject_exponent {
        let last = spec.q() - 1;
        let phi = spec.phis()[last];
        basis.terms.push(RealBasisTerm::power_log(e, phi, 0, last));
    }
    let cfg = {
        let mut c = loaded.options.fd_config();
        c.h_rel = settings.h_rel;
        c
    };
    let points = default_points(spec.n, settings.points, settings.seed);
    let var = basis.variable();
    let mut terms = Vec::new();
    for (i, t) in basis.terms.iter().enumerate() {
        let residual = annihilation_residual(spec, t);
        let symbolic_passed = passes(&residual, SYMBOLIC_TOL);
        let numeric = if points.is_empty() {
            None
        } else {
            Some(hybrid_term_residual(spec, t, i, &points, &cfg)?)
        };
        let passed = symbolic_passed && numeric.as_ref().is_none_or(|r| r.passed);
        terms.push(TermVerification {
            index: i,
            label: t.render(var),
            injected: i >= genuine,
            symbolic_max_coeff: residual.max_abs_coeff(),
            symbolic_passed,
            numeric,
            passed,
        });
    }
    let passed = terms.iter().all(|t| t.passed);
    Ok(VerifyReport {
        mode: mode_name(settings.mode).to_string(),
        symbolic_tol: SYMBOLIC_TOL,
        numeric_tol: cfg.rel_tol,
        points: points.len(),
        seed: settings.seed,
        h_rel: cfg.h_rel,
        numeric_skipped: points.is_empty(),
        terms,
        passed,
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn verify(
    loaded: &LoadedSpec,
    settings: &VerifySettings,
    json: bool,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let report = verify_report(loaded, settings)?;
    if json {
        write_json(out, &report)?;
    } else {
        writeln!(out, "mode: {}", report.mode)?;
        writeln!(out, "symbolic tolerance: {:e}", report.symbolic_tol)?;
        if report.numeric_skipped {
            writeln!(out, "numeric check skipped (0 points)")?;
        } else {
            writeln!(
                out,
                "numeric: {} points in [0.5, 2]^{}, seed {}, h_rel {:e}, tolerance {:e}",
                report.points, loaded.spec.n, report.seed, report.h_rel, report.numeric_tol
            )?;
        }
        for t in &report.terms {
            let mut line = format!(
                "term {:>3}  {:<32} symbolic {:.3e} {}",
                t.index,
                t.label,
                t.symbolic_max_coeff,
                verdict(t.symbolic_passed)
            );
            if let Some(n) = &t.numeric {
                line.push_str(&format!("  numeric max_rel {:.3e} {}", n.max_rel, verdict(n.passed)));
            }
            if t.injected {
                line.push_str("  (injected)");
            }
            writeln!(out, "{}", line.trim_end())?;
        }
        for t in report.terms.iter().filter(|t| !t.passed) {
            writeln!(out, "FAILED: term {} ({})", t.index, t.label)?;
        }
        writeln!(out, "result: {}", verdict(report.passed))?;
    }
    Ok(if report.passed {
        Status::Success
    } else {
        Status::ChecksFailed
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvalRow {
    pub point: Vec<f64>,
    pub r: f64,
    pub value: f64,
}

pub fn eval_values(
    loaded: &LoadedSpec,
    mode: BasisMode,
    points: &[Vec<f64>],
    coeffs: Option<&[f64]>,
) -> Result<Vec<EvalRow>, CliError> {
    let basis = basis_for(loaded, mode)?;
    let n = loaded.spec.n;
    points
        .iter()
        .map(|coords| {
            if coords.len() != n {
                return Err(CliError::Usage(format!(
                    "point {coords:?} has {} coordinates but n = {n}",
                    coords.len()
                )));
            }
            let x = Point::new(coords.clone())?;
            let r = radial(&x, loaded.spec.p)?;
            let value = basis.combine_at_radius(coeffs, r)?;
            Ok(EvalRow {
                point: coords.clone(),
                r,
                value,
            })
        })
        .collect()
}

pub fn eval(
    loaded: &LoadedSpec,
    mode: BasisMode,
    points: &[Vec<f64>],
    coeffs: Option<&[f64]>,
    json: bool,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let rows = eval_values(loaded, mode, points, coeffs)?;
    if json {
        write_json(out, &rows)?;
    } else {
        for row in &rows {
            let coords: Vec<String> = row.point.iter().map(|c| c.to_string()).collect();
            writeln!(out, "u({}) = {}", coords.join(", "), row.value)?;
        }
    }
    Ok(Status::Success)
}
