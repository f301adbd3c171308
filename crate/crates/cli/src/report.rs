//! Verification reports and their CSV / JSON renderings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

/// One checked quantity. A row passes iff `abs_err <= tol`.
///
/// Two-sided rows carry `abs_err = |computed - reference|`. One-sided rows
/// (`computed <= reference` or `computed >= reference`) carry the amount by
/// which the bound is exceeded, with `tol = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub case: String,
    pub inputs: String,
    pub computed: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

fn rel(err: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        err
    } else {
        err / reference.abs()
    }
}

impl Row {
    fn build(case: &str, inputs: String, computed: f64, reference: f64, abs_err: f64, tol: f64) -> Self {
        Self {
            case: case.to_string(),
            inputs,
            computed,
            reference,
            abs_err,
            rel_err: rel(abs_err, reference),
            tol,
            // NaN never passes
            pass: abs_err <= tol,
        }
    }

    pub fn close(case: &str, inputs: impl Into<String>, computed: f64, reference: f64, tol: f64) -> Self {
        Self::build(case, inputs.into(), computed, reference, (computed - reference).abs(), tol)
    }

    /// Relative tolerance, stored as the equivalent absolute one.
    pub fn close_rel(case: &str, inputs: impl Into<String>, computed: f64, reference: f64, rel_tol: f64) -> Self {
        Self::close(case, inputs, computed, reference, rel_tol * reference.abs())
    }

    pub fn at_most(case: &str, inputs: impl Into<String>, computed: f64, bound: f64) -> Self {
        let excess = if computed.is_nan() { f64::NAN } else { (computed - bound).max(0.0) };
        Self::build(case, inputs.into(), computed, bound, excess, 0.0)
    }

    pub fn at_least(case: &str, inputs: impl Into<String>, computed: f64, bound: f64) -> Self {
        let shortfall = if computed.is_nan() { f64::NAN } else { (bound - computed).max(0.0) };
        Self::build(case, inputs.into(), computed, bound, shortfall, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub rows: Vec<Row>,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(command: &str, parameters: BTreeMap<String, serde_json::Value>, rows: Vec<Row>, runtime_ms: u64) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        Self {
            command: command.to_string(),
            parameters,
            rows,
            pass,
            runtime_ms,
        }
    }

    pub fn failed_rows(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV row per report row; runtime is left out so identical runs
/// produce identical files.
pub fn write_csv<W: Write>(report: &VerificationReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["case", "inputs", "computed", "reference", "abs_err", "rel_err", "tol", "pass"])?;
    for r in &report.rows {
        w.write_record([
            r.case.clone(),
            r.inputs.clone(),
            num(r.computed),
            num(r.reference),
            num(r.abs_err),
            num(r.rel_err),
            num(r.tol),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &VerificationReport, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_semantics() {
        assert!(Row::close("a", "", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!Row::close("a", "", 1.0, 1.1, 1e-8).pass);
        assert!(Row::close_rel("a", "", 101.0, 100.0, 0.02).pass);
        let r = Row::at_most("b", "", 0.3, 0.2);
        assert!(!r.pass);
        assert!((r.abs_err - 0.1).abs() < 1e-15);
        assert!(Row::at_least("c", "", 0.95, 0.9).pass);
        assert!(!Row::close("d", "", f64::NAN, 0.0, 1.0).pass);
        assert!(!Row::at_most("d", "", f64::NAN, 1.0).pass);
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let report = VerificationReport::new("x", BTreeMap::new(), vec![Row::close("a", "h=0.1", 0.1, 0.1, 0.0)], 5);
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(!text.contains("runtime"));
    }
}
