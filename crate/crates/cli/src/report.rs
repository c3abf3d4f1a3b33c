//! The machine-readable result of one command.

use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::format::{fmt_num, round_opt, round_sig};

/// One parameter point a command ran at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
}

impl ParamPoint {
    pub fn new(alpha: f64) -> Self {
        ParamPoint {
            alpha: round_sig(alpha),
            beta: None,
            gamma: None,
            x0: None,
        }
    }

    pub fn beta(mut self, b: f64) -> Self {
        self.beta = Some(round_sig(b));
        self
    }

    pub fn gamma(mut self, g: f64) -> Self {
        self.gamma = Some(round_sig(g));
        self
    }

    pub fn x0(mut self, x: f64) -> Self {
        self.x0 = Some(round_sig(x));
        self
    }
}

pub const SKIPPED_DEGENERATE: &str = "SKIPPED_DEGENERATE";

/// `pass` holds exactly when `|lhs − rhs| ≤ tolerance`. Skipped rows have no
/// values, count as passing and carry the reason in `note`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn check(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        // decided on the full-precision values
        let pass = (lhs - rhs).abs() <= tolerance;
        Record {
            name: name.into(),
            lhs: Some(round_sig(lhs)),
            rhs: Some(round_sig(rhs)),
            tolerance: round_sig(tolerance),
            pass,
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl std::fmt::Display) -> Self {
        Record {
            name: name.into(),
            lhs: None,
            rhs: None,
            tolerance: 0.0,
            pass: true,
            note: Some(format!("{SKIPPED_DEGENERATE}: {reason}")),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_skipped(&self) -> bool {
        self.lhs.is_none()
    }
}

/// A Monte Carlo estimate with its target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub name: String,
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
    pub target: Option<f64>,
    pub z: Option<f64>,
    pub reduction: String,
    pub censored: f64,
}

impl EstimateRow {
    pub fn new(name: impl Into<String>, e: &hsl_core::stable_mc::McEstimate, target: Option<f64>) -> Self {
        let reduction = match e.reduction {
            hsl_core::stable_mc::Reduction::Mean => "mean",
            hsl_core::stable_mc::Reduction::MedianOfMeans => "median_of_means",
        };
        EstimateRow {
            name: name.into(),
            mean: round_sig(e.mean),
            stderr: round_sig(e.stderr),
            n: e.n,
            target: round_opt(target),
            z: round_opt(target.map(|t| e.z_score(t))),
            reduction: reduction.into(),
            censored: round_sig(e.censored),
        }
    }
}

/// Columns of numbers; missing entries are `None` (empty in CSV).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row.into_iter().map(round_opt).collect());
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv_writer();
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| v.map(fmt_num).unwrap_or_default())).map_err(csv_err)?;
        }
        finish(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub params: Vec<ParamPoint>,
    pub results: Vec<Record>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub estimates: Vec<EstimateRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub seed: Option<u64>,
    /// Left out unless timing is requested, so that reports of identical
    /// runs are byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            params: Vec::new(),
            results: Vec::new(),
            estimates: Vec::new(),
            table: None,
            seed: None,
            wall_time_ms: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.results.iter().filter(|r| !r.pass)
    }

    pub fn skipped(&self) -> impl Iterator<Item = &Record> {
        self.results.iter().filter(|r| r.is_skipped())
    }

    /// 0 when every record passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// The table when there is one, otherwise the records.
    pub fn to_csv(&self) -> CliResult<String> {
        if let Some(t) = &self.table {
            return t.to_csv();
        }
        let mut w = csv_writer();
        w.write_record(["name", "lhs", "rhs", "tolerance", "pass", "note"]).map_err(csv_err)?;
        for r in &self.results {
            let f = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
            w.write_record([
                r.name.clone(),
                f(r.lhs),
                f(r.rhs),
                fmt_num(r.tolerance),
                r.pass.to_string(),
                r.note.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        finish(w)
    }

    /// One line per failed or skipped record, for the terminal.
    pub fn summary(&self) -> String {
        let total = self.results.len();
        let failed = self.failures().count();
        let skipped = self.skipped().count();
        let mut s = format!("{}: {} checks, {} failed, {} skipped\n", self.command, total, failed, skipped);
        for r in self.failures() {
            let f = |v: Option<f64>| v.map(fmt_num).unwrap_or_else(|| "-".into());
            s.push_str(&format!("FAIL {} lhs={} rhs={} tol={}\n", r.name, f(r.lhs), f(r.rhs), fmt_num(r.tolerance)));
        }
        s
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn csv_err(e: csv::Error) -> crate::error::CliError {
    crate::error::CliError::Usage(format!("csv output: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pass_follows_tolerance() {
        assert!(Record::check("a", 1.0, 1.0 + 1e-10, 1e-9).pass);
        assert!(!Record::check("a", 1.0, 1.1, 1e-9).pass);
        assert!(!Record::check("a", f64::NAN, 1.0, 1.0).pass);
        let s = Record::skipped("b", "beta = alpha/2");
        assert!(s.pass && s.is_skipped());
        assert!(s.note.unwrap().starts_with(SKIPPED_DEGENERATE));
    }

    #[test]
    fn csv_has_unix_line_endings() {
        let mut t = Table::new(&["alpha", "beta", "kappa"]);
        t.push(vec![Some(1.0), Some(0.5), Some(1.0 / std::f64::consts::PI)]);
        t.push(vec![Some(1.0), Some(0.6), None]);
        assert_eq!(t.to_csv().unwrap(), "alpha,beta,kappa\n1,0.5,0.318309886184\n1,0.6,\n");
    }

    proptest! {
        #[test]
        fn json_round_trip(lhs in -1e6f64..1e6, rhs in -1e6f64..1e6, tol in 0.0f64..10.0, seed in proptest::option::of(any::<u64>())) {
            let mut r = RunReport::new("verify identities");
            r.params.push(ParamPoint::new(0.7).beta(0.3));
            r.results.push(Record::check("x", lhs, rhs, tol));
            r.results.push(Record::skipped("y", "degenerate"));
            r.seed = seed;
            let mut t = Table::new(&["a"]);
            t.push(vec![Some(lhs)]);
            r.table = Some(t);
            let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(back.to_json().unwrap(), r.to_json().unwrap());
        }
    }
}
