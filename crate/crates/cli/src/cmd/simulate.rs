use hsl_core::constants::{kappa, StableParams};
use hsl_core::kernels::{groundstate_pair, ExitCdfTable};
use hsl_core::quad::QuadConfig;
use hsl_core::stable_mc::{
    estimate_exit_law, estimate_occupation, estimate_survival_weighted, survival_slope, Scheme, SimConfig,
};

use crate::args::{SchemeArg, SimulateArgs, Task};
use crate::error::{CliError, CliResult};
use crate::format::fmt_num;
use crate::grid::parse_time_grid;
use crate::report::{EstimateRow, ParamPoint, Record, RunReport};

/// Grid size of the exit-law reference CDF.
const EXIT_TABLE_POINTS: usize = 512;

fn config(args: &SimulateArgs) -> CliResult<SimConfig> {
    let scheme = match args.scheme {
        SchemeArg::Euler => Scheme::Euler,
        SchemeArg::Richardson => Scheme::EulerRichardson,
    };
    if args.paths == 0 {
        return Err(CliError::usage("--paths must be positive"));
    }
    let cfg = SimConfig::new(args.alpha, args.x0)?
        .with_paths(args.paths)
        .with_dt(args.dt)
        .with_seed(args.seed)
        .with_scheme(scheme);
    cfg.validate()?;
    Ok(cfg)
}

fn need(v: Option<f64>, flag: &str, task: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::usage(format!("simulate {task} needs --{flag}")))
}

/// Each task reports its estimate against the closed-form target; a record
/// fails when they are more than 3 standard errors apart (or outside the
/// stated tolerance for slopes and distances).
pub fn run(args: &SimulateArgs) -> CliResult<RunReport> {
    let cfg = config(args)?;
    let (alpha, x0) = (args.alpha, args.x0);
    let mut report = RunReport::new(match args.task {
        Task::Occupation => "simulate occupation",
        Task::Survival => "simulate survival",
        Task::ExitLaw => "simulate exit-law",
        Task::Groundstate => "simulate groundstate",
    });
    report.seed = Some(args.seed);
    let mut point = ParamPoint::new(alpha).x0(x0);
    match args.task {
        Task::Occupation => {
            let beta = need(args.beta, "beta", "occupation")?;
            let p = StableParams::new(alpha, beta)?;
            point = point.beta(beta);
            let target = x0.powf(p.half_alpha() - beta) / kappa(&p);
            let e = estimate_occupation(alpha, beta, &cfg)?;
            let k = args.tol.unwrap_or(3.0);
            report.results.push(Record::check("occupation", e.mean, target, k * e.stderr));
            report.estimates.push(EstimateRow::new("occupation", &e, Some(target)));
        }
        Task::Survival => {
            let grid = parse_time_grid(&args.t)?;
            let gamma = args.gamma.unwrap_or(0.0);
            if gamma != 0.0 {
                point = point.gamma(gamma);
            }
            let est = estimate_survival_weighted(alpha, x0, gamma, &grid, &cfg)?;
            let slope = survival_slope(&grid, &est);
            let target = -0.5 - gamma / alpha;
            let tol = args.tol.unwrap_or(if gamma == 0.0 { 0.05 } else { 0.07 });
            report.results.push(Record::check("survival_slope", slope, target, tol));
            for (t, e) in grid.iter().zip(&est) {
                report.estimates.push(EstimateRow::new(format!("survival(t={})", fmt_num(*t)), e, None));
            }
        }
        Task::ExitLaw => {
            let sample = estimate_exit_law(alpha, x0, &cfg)?;
            let table = ExitCdfTable::build(alpha, EXIT_TABLE_POINTS, &QuadConfig::default().with_rel(1e-9))?;
            let ks = table.ks_distance(x0, &sample.positions);
            report.results.push(Record::check("exit_law_ks", ks, 0.0, args.tol.unwrap_or(0.01)));
            let max = sample.positions.last().copied().unwrap_or(0.0);
            report.results.push(Record::check("exit_below_zero", max.max(0.0), 0.0, 0.0));
        }
        Task::Groundstate => {
            let beta = need(args.beta, "beta", "groundstate")?;
            let gamma = need(args.gamma, "gamma", "groundstate")?;
            let p = StableParams::new(alpha, beta)?.with_gamma(gamma)?;
            point = point.beta(beta).gamma(gamma);
            let g = groundstate_pair(&p, x0, &cfg)?;
            let h_target = x0.powf(p.half_alpha() - beta);
            let q_target = kappa(&p) * x0.powf(-p.half_alpha() - beta);
            let k = args.tol.unwrap_or(3.0);
            report.results.push(Record::check("h_hat", g.h_hat.mean, h_target, k * g.h_hat.stderr));
            report.results.push(Record::check("q_hat", g.q_hat.mean, q_target, k * g.q_hat.stderr));
            report.estimates.push(EstimateRow::new("c_hat", &g.c_hat, None));
            report.estimates.push(EstimateRow::new("h_hat", &g.h_hat, Some(h_target)));
            report.estimates.push(EstimateRow::new("q_hat", &g.q_hat, Some(q_target)));
        }
    }
    report.params.push(point);
    Ok(report)
}
