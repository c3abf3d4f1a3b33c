use hsl_core::constants::{ConstantSet, StableParams};

use crate::args::ConstantsArgs;
use crate::error::CliResult;
use crate::grid::parse_range;
use crate::report::{ParamPoint, RunReport, Table};

pub const COLUMNS: [&str; 9] = ["alpha", "beta", "a_alpha", "c_alpha", "hat_c", "tilde_c", "bar_c", "kappa", "kappa_r"];

/// One row per β; every parameter is validated before anything is computed.
pub fn run(args: &ConstantsArgs) -> CliResult<RunReport> {
    let betas = match (&args.beta_grid, args.beta) {
        (Some(g), _) => parse_range(g)?,
        (None, Some(b)) => vec![b],
        (None, None) => unreachable!("clap requires one of --beta, --beta-grid"),
    };
    let points = betas.iter().map(|&b| StableParams::new(args.alpha, b)).collect::<Result<Vec<_>, _>>()?;
    let mut report = RunReport::new("constants");
    let mut table = Table::new(&COLUMNS);
    for p in &points {
        let c = ConstantSet::compute(p)?;
        table.push(vec![
            Some(c.alpha),
            Some(c.beta),
            Some(c.a_alpha),
            c.c_alpha,
            c.hat_c,
            c.tilde_c,
            Some(c.bar_c),
            Some(c.kappa),
            c.kappa_r,
        ]);
        report.params.push(ParamPoint::new(p.alpha).beta(p.beta));
    }
    report.table = Some(table);
    Ok(report)
}
