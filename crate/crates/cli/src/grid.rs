//! Parsing of parameter grids: `start:stop:step`, comma lists and `NxM`.

use crate::error::{CliError, CliResult};
use crate::format::round_sig;

fn num(s: &str) -> CliResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::usage(format!("'{s}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("'{s}' is not finite")))
    }
}

/// `start:stop:step`, inclusive of `stop` when it lies on the lattice.
pub fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, h] = parts[..] else {
        return Err(CliError::usage(format!("grid '{s}' must be start:stop:step")));
    };
    let (a, b, h) = (num(a)?, num(b)?, num(h)?);
    if h.is_nan() || h <= 0.0 || b < a {
        return Err(CliError::usage(format!("grid '{s}' needs step > 0 and stop >= start")));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::usage(format!("grid '{s}' has too many points")));
    }
    Ok((0..=n).map(|i| round_sig(a + i as f64 * h)).collect())
}

/// A time grid: `start:stop:step`, or `start:stop` for 17 log-spaced points.
pub fn parse_time_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if let [a, b] = parts[..] {
        let (a, b) = (num(a)?, num(b)?);
        if !(a > 0.0 && b > a) {
            return Err(CliError::usage(format!("time range '{s}' needs 0 < start < stop")));
        }
        const N: usize = 16;
        return Ok((0..=N).map(|k| round_sig(a * (b / a).powf(k as f64 / N as f64))).collect());
    }
    parse_range(s)
}

/// Comma-separated values, or a `start:stop:step` range.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    if s.contains(':') {
        return parse_range(s);
    }
    s.split(',').map(num).collect()
}

/// `NxM` interior grid: `α_i = 2i/(N+1)`, `β_j = j/(M+1)`.
pub fn parse_dims(s: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let bad = || CliError::usage(format!("grid '{s}' must look like 20x20"));
    let (n, m) = s.split_once('x').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    if n == 0 || m == 0 || n > 2000 || m > 2000 {
        return Err(bad());
    }
    let alphas = (1..=n).map(|i| 2.0 * i as f64 / (n + 1) as f64).collect();
    let betas = (1..=m).map(|j| j as f64 / (m + 1) as f64).collect();
    Ok((alphas, betas))
}
