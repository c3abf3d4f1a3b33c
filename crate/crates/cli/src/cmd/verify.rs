use hsl_core::constants::{kappa, prop35_ratio, remark46_check, trig_identities, StableParams};
use hsl_core::hardy::{hardy_identity_gap_at, hardy_inequality_check, Resolution, TestFunction};
use hsl_core::kernels::green_identity_check;
use hsl_core::quad::facts::{bar_c_quadrature, fact_check, Fact};
use hsl_core::quad::QuadConfig;
use hsl_core::Error;
use rayon::prelude::*;

use crate::args::{Suite, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::grid::{parse_dims, parse_list};
use crate::report::{ParamPoint, Record, RunReport};

/// Errors that mark a parameter point as degenerate rather than failing the run.
fn is_degenerate(e: &Error) -> bool {
    matches!(e, Error::DegenerateParams { .. } | Error::PoleArgument(_) | Error::PoleAtOne)
}

fn record_or_skip(name: &str, r: hsl_core::Result<Record>) -> CliResult<Record> {
    match r {
        Ok(rec) => Ok(rec),
        Err(e) if is_degenerate(&e) => Ok(Record::skipped(name, e)),
        Err(e) => Err(e.into()),
    }
}

fn list_or(s: &Option<String>, default: &[f64]) -> CliResult<Vec<f64>> {
    match s {
        Some(s) => parse_list(s),
        None => Ok(default.to_vec()),
    }
}

fn tag(name: &str, p: &StableParams) -> String {
    format!("{name}(alpha={}, beta={})", crate::format::fmt_num(p.alpha), crate::format::fmt_num(p.beta))
}

pub fn run(args: &VerifyArgs) -> CliResult<RunReport> {
    match args.suite {
        Suite::Integrals => integrals(args),
        Suite::Identities => identities(args),
        Suite::Green => green(args),
        Suite::Hardy => hardy(args),
    }
}

fn points(alphas: &[f64], betas: &[f64]) -> CliResult<Vec<StableParams>> {
    let mut out = Vec::new();
    for &a in alphas {
        for &b in betas {
            out.push(StableParams::new(a, b)?);
        }
    }
    Ok(out)
}

/// Every integral identity whose window contains the point, plus the
/// quadrature of `C̄`.
fn integrals(args: &VerifyArgs) -> CliResult<RunReport> {
    let alphas = list_or(&args.alpha, &[])?;
    let betas = list_or(&args.beta, &[])?;
    if alphas.is_empty() || betas.is_empty() {
        return Err(CliError::usage("verify integrals needs --alpha and --beta"));
    }
    let tol = args.tol.unwrap_or(1e-7);
    let cfg = QuadConfig::default();
    let mut report = RunReport::new("verify integrals");
    for p in points(&alphas, &betas)? {
        report.params.push(ParamPoint::new(p.alpha).beta(p.beta));
        for fact in Fact::ALL {
            if !fact.in_window(p.alpha, p.beta) {
                continue;
            }
            let name = tag(fact.name(), &p);
            let r = fact_check(fact, &p, &cfg).map(|c| Record::check(&name, c.lhs, c.rhs, tol * (1.0 + c.rhs.abs())));
            report.results.push(record_or_skip(&name, r)?);
        }
        let name = tag("bar-c", &p);
        let r = bar_c_quadrature(&p, &cfg).map(|c| Record::check(&name, c.lhs, c.rhs, tol * (1.0 + c.rhs.abs())));
        report.results.push(record_or_skip(&name, r)?);
    }
    Ok(report)
}

/// The ratio identity (β ≤ 1/2), the whole-line identity and the two trig
/// simplifications on an interior grid.
fn identities(args: &VerifyArgs) -> CliResult<RunReport> {
    let (alphas, betas) = match &args.grid {
        Some(g) => parse_dims(g)?,
        None if args.alpha.is_some() || args.beta.is_some() => (list_or(&args.alpha, &[1.5])?, list_or(&args.beta, &[0.3])?),
        None => parse_dims("20x20")?,
    };
    let tol = args.tol.unwrap_or(1e-9);
    let pts = points(&alphas, &betas)?;
    let rows: Vec<CliResult<Vec<Record>>> = pts
        .par_iter()
        .map(|p| {
            let mut recs = Vec::new();
            if p.is_degenerate() {
                recs.push(Record::skipped(tag("identities", p), "beta on a degenerate line"));
                return Ok(recs);
            }
            let k = kappa(p);
            if p.beta <= 0.5 {
                let name = tag("prop35_ratio", p);
                recs.push(record_or_skip(&name, prop35_ratio(p).map(|r| Record::check(&name, r * k, 1.0, tol)))?);
            }
            let name = tag("remark46_check", p);
            recs.push(record_or_skip(&name, remark46_check(p).map(|d| Record::check(&name, d, 0.0, tol * (1.0 + k))))?);
            let name = tag("trig_identities", p);
            recs.push(record_or_skip(&name, trig_identities(p).map(|t| Record::check(&name, t.max_rel_defect(), 0.0, tol)))?);
            Ok(recs)
        })
        .collect();
    let mut report = RunReport::new("verify identities");
    for (p, recs) in pts.iter().zip(rows) {
        report.params.push(ParamPoint::new(p.alpha).beta(p.beta));
        report.results.extend(recs?);
    }
    Ok(report)
}

/// `∫G(x,y)y^{−β−α/2}dy` against `x^{α/2−β}/κ_β`.
fn green(args: &VerifyArgs) -> CliResult<RunReport> {
    let alphas = list_or(&args.alpha, &[0.5, 1.0, 1.5])?;
    let betas = list_or(&args.beta, &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])?;
    let xs = list_or(&args.x, &[0.5, 1.0, 2.0])?;
    if let Some(&x) = xs.iter().find(|&&x| x.is_nan() || x <= 0.0) {
        return Err(CliError::usage(format!("x = {x} must be positive")));
    }
    let tol = args.tol.unwrap_or(1e-6);
    let cfg = QuadConfig::default();
    let mut cells = Vec::new();
    for p in points(&alphas, &betas)? {
        for &x in &xs {
            cells.push((p, x));
        }
    }
    let recs: Vec<CliResult<Record>> = cells
        .par_iter()
        .map(|(p, x)| {
            let name = format!("green_identity(alpha={}, beta={}, x={})", crate::format::fmt_num(p.alpha), crate::format::fmt_num(p.beta), crate::format::fmt_num(*x));
            record_or_skip(&name, green_identity_check(p, *x, &cfg).map(|c| Record::check(&name, c.lhs, c.rhs, tol * c.rhs.abs())))
        })
        .collect();
    let mut report = RunReport::new("verify green");
    for (p, x) in &cells {
        report.params.push(ParamPoint::new(p.alpha).beta(p.beta).x0(*x));
    }
    for r in recs {
        report.results.push(r?);
    }
    Ok(report)
}

/// Identity gap at the default and the refined mesh, and the sharp
/// inequality, for each test function.
fn hardy(args: &VerifyArgs) -> CliResult<RunReport> {
    let alphas = list_or(&args.alpha, &[1.0, 1.5])?;
    let betas = list_or(&args.beta, &[0.25, 0.5, 0.75])?;
    let tol = args.tol.unwrap_or(1e-3);
    let funcs = match &args.function {
        Some(f) => vec![(f.clone(), f.parse::<TestFunction>()?)],
        None => TestFunction::corpus(),
    };
    let res = Resolution::default();
    let mut report = RunReport::new("verify hardy");
    for &a in &alphas {
        for &b in &betas {
            let p = StableParams::new(a, b)?;
            report.params.push(ParamPoint::new(a).beta(b));
            for (name, u) in &funcs {
                let g0 = hardy_identity_gap_at(u, a, b, &res)?;
                let g1 = hardy_identity_gap_at(u, a, b, &res.refined())?;
                report.results.push(Record::check(format!("{} gap {name}", tag("hardy", &p)), g0, 0.0, tol));
                report.results.push(Record::check(format!("{} refined gap {name}", tag("hardy", &p)), g1, 0.0, 0.1 * tol));
            }
        }
        for (name, u) in &funcs {
            let (e, bound) = hardy_inequality_check(u, a)?;
            // passes iff energy ≥ bound
            report.results.push(Record::check(
                format!("hardy_inequality(alpha={}) {name}", crate::format::fmt_num(a)),
                (bound - e).max(0.0),
                0.0,
                0.0,
            ));
        }
    }
    Ok(report)
}
