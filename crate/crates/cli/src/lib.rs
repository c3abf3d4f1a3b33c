//! Driver behind the `hsl` binary: argument types, commands and the report
//! format. [`execute`] runs a parsed command line and returns what the binary
//! prints together with its exit code.
//!
//! Exit codes: 0 when every check passes, 1 when a numerical check fails,
//! 2 for usage, domain and I/O errors.

pub mod args;
pub mod cmd;
pub mod error;
pub mod format;
pub mod grid;
pub mod report;
pub mod svg;

use std::path::Path;
use std::time::Instant;

pub use args::Cli;
pub use error::{CliError, CliResult};
pub use report::RunReport;

use args::{Command, Format, Output};

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    /// Text for stdout (empty when the output went to a file).
    pub stdout: String,
    pub exit_code: i32,
}

fn render(report: &RunReport, format: Format) -> CliResult<String> {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn deliver(report: &RunReport, out: &Output, default: Format) -> CliResult<String> {
    let text = render(report, out.format.unwrap_or(default))?;
    match &out.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn timed(mut report: RunReport, start: Instant, timing: bool) -> RunReport {
    if timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let start = Instant::now();
    let (report, stdout) = match &cli.command {
        Command::Constants(a) => {
            let r = timed(cmd::constants::run(a)?, start, a.output.timing);
            let s = deliver(&r, &a.output, Format::Csv)?;
            (r, s)
        }
        Command::Verify(a) => {
            let r = timed(cmd::verify::run(a)?, start, a.output.timing);
            let s = deliver(&r, &a.output, Format::Json)?;
            (r, s)
        }
        Command::Simulate(a) => {
            let r = timed(cmd::simulate::run(a)?, start, a.output.timing);
            let s = deliver(&r, &a.output, Format::Json)?;
            (r, s)
        }
        Command::Plot(a) => {
            let (r, _) = cmd::plot::run(a)?;
            let s = render(&r, a.format)?;
            (r, s)
        }
    };
    let exit_code = report.exit_code();
    Ok(Outcome {
        report,
        stdout,
        exit_code,
    })
}

/// Caps the worker pool from `HSL_THREADS` when it is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("HSL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::usage(format!("HSL_THREADS = '{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size the thread pool: {e}")))
}
