use torusgauss::phasecalc::{decimal, decimal_digits};
use torusgauss::VerificationReport;

use crate::{CliError, OutputFormat, RunSummary};

const BOUND_DIGITS: usize = 6;

fn value_digits(r: &VerificationReport) -> usize {
    decimal_digits(r.lhs.precision_bits().min(r.rhs.precision_bits()))
}

/// Column names in output order: parameters first, then the fixed fields.
pub fn columns(summary: &RunSummary) -> Vec<String> {
    let mut cols: Vec<String> = summary
        .reports
        .first()
        .map(|r| r.params.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    for c in [
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_diff",
        "tolerance",
        "pass",
    ] {
        cols.push(c.to_string());
    }
    cols
}

fn row(r: &VerificationReport) -> Vec<(String, String)> {
    let d = value_digits(r);
    let mut out = r.params.clone();
    out.push(("lhs_re".into(), r.lhs.re_decimal(d)));
    out.push(("lhs_im".into(), r.lhs.im_decimal(d)));
    out.push(("rhs_re".into(), r.rhs.re_decimal(d)));
    out.push(("rhs_im".into(), r.rhs.im_decimal(d)));
    out.push(("abs_diff".into(), decimal(&r.abs_diff, BOUND_DIGITS)));
    out.push(("tolerance".into(), decimal(&r.tolerance, BOUND_DIGITS)));
    out.push(("pass".into(), r.pass.to_string()));
    out
}

pub fn to_json(summary: &RunSummary) -> String {
    use serde_json::{Map, Value};
    let cases: Vec<Value> = summary
        .reports
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = row(r)
                .into_iter()
                .map(|(k, v)| (k, Value::String(v)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = Map::new();
    s.insert("total".into(), summary.total.into());
    s.insert("passed".into(), summary.passed.into());
    s.insert("failed".into(), summary.failed.into());
    s.insert(
        "worst_abs_diff".into(),
        decimal(&summary.worst_abs_diff, BOUND_DIGITS).into(),
    );
    s.insert("skipped".into(), summary.skipped.clone().into());
    let mut doc = Map::new();
    doc.insert("cases".into(), Value::Array(cases));
    doc.insert("summary".into(), Value::Object(s));
    let mut text =
        serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    text.push('\n');
    text
}

pub fn to_csv(summary: &RunSummary) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let cols = columns(summary);
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(&cols).map_err(err)?;
    for r in &summary.reports {
        let fields = row(r);
        if fields.len() != cols.len() {
            return Err(CliError::Output(
                "cases with differing parameter sets cannot share a CSV".into(),
            ));
        }
        w.write_record(fields.iter().map(|(_, v)| v)).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn to_text(summary: &RunSummary) -> String {
    let mut out = String::new();
    for r in &summary.reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!(
            "{} {}  lhs={} {:+}i  rhs={} {:+}i  |diff|<={}  tol={}\n",
            if r.pass { "PASS" } else { "FAIL" },
            params.join(" "),
            r.lhs.re_decimal(12),
            r.lhs.im_f64(),
            r.rhs.re_decimal(12),
            r.rhs.im_f64(),
            decimal(&r.abs_diff, 3),
            decimal(&r.tolerance, 3),
        ));
    }
    for s in &summary.skipped {
        out.push_str(&format!("SKIP {s}\n"));
    }
    out.push_str(&format!(
        "total={} passed={} failed={} worst_abs_diff={}\n",
        summary.total,
        summary.passed,
        summary.failed,
        decimal(&summary.worst_abs_diff, BOUND_DIGITS)
    ));
    out
}

pub fn render(summary: &RunSummary, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => Ok(to_json(summary)),
        OutputFormat::Csv => to_csv(summary),
        OutputFormat::Text => Ok(to_text(summary)),
    }
}
