//! Machine-readable run reports.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::{Suite, SuiteConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub suite: Suite,
    pub case: String,
    pub seed_offset: u64,
    pub inputs_digest: String,
    /// `None` when the case raised an error or produced a non-finite value.
    #[serde(serialize_with = "scientific")]
    pub residual: Option<f64>,
    #[serde(serialize_with = "scientific_some")]
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseRecord {
    pub fn new(
        suite: Suite,
        case: String,
        seed_offset: u64,
        inputs_digest: String,
        outcome: Result<f64, String>,
        tol: f64,
    ) -> Self {
        let (residual, error) = match outcome {
            Ok(r) if r.is_finite() => (Some(r), None),
            Ok(r) => (None, Some(format!("non-finite residual {r}"))),
            Err(e) => (None, Some(e)),
        };
        let pass = residual.is_some_and(|r| r < tol);
        Self { suite, case, seed_offset, inputs_digest, residual, tol, pass, error }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: SuiteConfig,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, cases: Vec<CaseRecord>) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let summary = Summary { total: cases.len(), passed, failed: cases.len() - passed };
        Self { version: env!("CARGO_PKG_VERSION").to_owned(), config, cases, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Whether the records agree with the summary and every `pass` flag
    /// agrees with its residual and tolerance.
    pub fn is_consistent(&self) -> bool {
        let passed = self.cases.iter().filter(|c| c.pass).count();
        self.summary == Summary { total: self.cases.len(), passed, failed: self.cases.len() - passed }
            && self.cases.iter().all(|c| c.pass == c.residual.is_some_and(|r| r < c.tol))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn emit_report(report: &SuiteReport, path: impl AsRef<Path>) -> std::io::Result<()> {
    let mut text = report.to_json();
    text.push('\n');
    std::fs::write(path, text)
}

pub fn parse_report(text: &str) -> serde_json::Result<SuiteReport> {
    serde_json::from_str(text)
}

pub fn read_report(path: impl AsRef<Path>) -> std::io::Result<SuiteReport> {
    let text = std::fs::read_to_string(path)?;
    parse_report(&text).map_err(std::io::Error::other)
}

/// Seventeen significant digits, enough to round-trip any `f64`.
fn raw(v: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{v:.16e}")).expect("scientific literal is valid JSON")
}

fn scientific<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => raw(*v).serialize(s),
        None => s.serialize_none(),
    }
}

fn scientific_some<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*v).serialize(s)
}

/// Fixed-width table of all cases followed by a summary line.
pub fn render_table(report: &SuiteReport) -> String {
    let width = report.cases.iter().map(|c| c.case.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(out, "{:<4}  {:<width$}  {:>23}  {:>9}", "", "case", "residual", "tol");
    for c in &report.cases {
        let status = if c.pass { "ok" } else { "FAIL" };
        let residual = c.residual.map_or_else(|| "-".to_owned(), |r| format!("{r:.16e}"));
        let _ = write!(out, "{status:<4}  {:<width$}  {residual:>23}  {:>9.1e}", c.case, c.tol);
        if let Some(e) = &c.error {
            let _ = write!(out, "  {e}");
        }
        out.push('\n');
    }
    let s = report.summary;
    let _ = writeln!(out, "total {}  passed {}  failed {}", s.total, s.passed, s.failed);
    out
}
