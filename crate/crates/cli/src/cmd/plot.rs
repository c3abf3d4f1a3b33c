use std::path::{Path, PathBuf};

use hsl_core::constants::{kappa, kappa_logderiv, kappa_r, StableParams};

use crate::args::{Figure, PlotArgs};
use crate::error::{CliError, CliResult};
use crate::format::fmt_num;
use crate::grid::{parse_list, parse_range};
use crate::report::{ParamPoint, Record, RunReport, Table};
use crate::svg::{Plot, Series};

/// Paths written by a plot command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Written {
    pub csv: PathBuf,
    pub svg: PathBuf,
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// The whole-line constant where it is defined as a regular value.
fn kappa_r_primary(alpha: f64, beta: f64) -> Option<f64> {
    kappa_r(alpha, beta).ok().filter(|f| !f.extended && f.value.is_finite()).map(|f| f.value)
}

pub fn run(args: &PlotArgs) -> CliResult<(RunReport, Written)> {
    let alphas = match &args.alpha {
        Some(s) => parse_list(s)?,
        None if args.figure == Figure::Kappa => vec![0.5, 1.0, 1.5],
        None => vec![0.5],
    };
    let betas = parse_range(&args.beta_grid)?;
    // validate every point before computing anything
    for &a in &alphas {
        for &b in &betas {
            StableParams::new(a, b)?;
        }
    }
    let step = if betas.len() > 1 { betas[1] - betas[0] } else { 0.0 };
    let compare = args.figure == Figure::Compare;
    let name = if compare { "compare" } else { "kappa" };
    let prefix = args.out.clone().unwrap_or_else(|| PathBuf::from(name));

    let mut report = RunReport::new(format!("plot {name}"));
    let cols: &[&str] = if compare { &["alpha", "beta", "kappa", "kappa_r"] } else { &["alpha", "beta", "kappa"] };
    let mut table = Table::new(cols);
    let mut plot = Plot {
        title: if compare { "kappa against the whole-line constant".into() } else { "beta -> kappa".into() },
        x_label: "beta".into(),
        y_label: "kappa".into(),
        ..Default::default()
    };
    for &a in &alphas {
        report.params.push(ParamPoint::new(a));
        let mut curve = Vec::new();
        let mut whole = Vec::new();
        for &b in &betas {
            let p = StableParams::new(a, b)?;
            let k = kappa(&p);
            curve.push((b, k));
            if compare {
                let kr = kappa_r_primary(a, b);
                if let Some(v) = kr {
                    whole.push((b, v));
                }
                table.push(vec![Some(a), Some(b), Some(k), kr]);
            } else {
                table.push(vec![Some(a), Some(b), Some(k)]);
            }
        }
        let tag = format!("alpha={}", fmt_num(a));
        // the maximum sits at β = 1/2
        let (argmax, _) = curve.iter().copied().fold((f64::NAN, f64::MIN), |m, c| if c.1 > m.1 { c } else { m });
        report.results.push(Record::check(format!("kappa_argmax({tag})"), argmax, 0.5, 0.5 * step));
        let asym = betas
            .iter()
            .map(|&b| {
                let (k1, k2) = (kappa(&StableParams::new(a, b).unwrap()), kappa(&StableParams::new(a, 1.0 - b).unwrap()));
                (k1 - k2).abs() / k1
            })
            .fold(0.0, f64::max);
        report.results.push(Record::check(format!("kappa_symmetry({tag})"), asym, 0.0, 1e-12));
        let sign_errors = betas
            .iter()
            .filter(|&&b| {
                let d = kappa_logderiv(&StableParams::new(a, b).unwrap()).value;
                let expect = (1.0 - 2.0 * b).signum();
                if (b - 0.5).abs() < 1e-12 {
                    d.abs() > 1e-12
                } else {
                    d.signum() != expect
                }
            })
            .count();
        report.results.push(Record::check(format!("logderiv_sign({tag})"), sign_errors as f64, 0.0, 0.0));
        if compare {
            let edge = 0.5 * (1.0 - a);
            let region: Vec<f64> = betas.iter().copied().filter(|&b| b > 0.0 && b <= edge + 1e-12).collect();
            let violations = region
                .iter()
                .filter(|&&b| match kappa_r_primary(a, b) {
                    Some(kr) => kappa(&StableParams::new(a, b).unwrap()) <= kr,
                    None => true,
                })
                .count();
            report.results.push(
                Record::check(format!("kappa_dominates_whole_line({tag})"), violations as f64, 0.0, 0.0)
                    .with_note(format!("{} grid points in (0, {}]", region.len(), fmt_num(edge))),
            );
            if edge > 0.0 && plot.shade.is_none() {
                plot.shade = Some((0.0, edge, "kappa > whole-line".into()));
            }
            plot.series.push(Series {
                label: format!("kappa, {tag}"),
                points: curve,
                dashed: false,
            });
            plot.series.push(Series {
                label: format!("whole line, {tag}"),
                points: whole,
                dashed: true,
            });
        } else {
            plot.series.push(Series {
                label: tag,
                points: curve,
                dashed: false,
            });
        }
    }
    let written = Written {
        csv: with_ext(&prefix, "csv"),
        svg: with_ext(&prefix, "svg"),
    };
    write(&written.csv, &table.to_csv()?)?;
    write(&written.svg, &plot.render())?;
    Ok((report, written))
}
