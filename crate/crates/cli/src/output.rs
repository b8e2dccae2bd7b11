use std::io::{self, Write};

use eslab_core::report::Report;
use serde::Serialize;
use serde_json::Value;

use crate::config::OutFormat;

/// Flat CSV row of a check report; the column order is part of the
/// output contract.
#[derive(Serialize)]
struct ReportRow<'a> {
    suite: &'a str,
    seed: u64,
    precision: u32,
    check: &'a str,
    k: i64,
    trials: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
    detail: &'a str,
}

pub fn report_csv(r: &Report, w: impl Write) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for rec in &r.records {
        out.serialize(ReportRow {
            suite: &r.suite,
            seed: r.seed,
            precision: r.precision,
            check: &rec.check,
            k: rec.k,
            trials: rec.trials,
            max_residual: rec.max_residual,
            tolerance: rec.tolerance,
            pass: rec.pass,
            detail: rec.detail.as_deref().unwrap_or(""),
        })?;
    }
    out.flush()
}

pub fn report_pretty(r: &Report, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "suite {}  seed {}  precision {}", r.suite, r.seed, r.precision)?;
    let width = r.records.iter().map(|c| c.check.len()).max().unwrap_or(5).max(5);
    for c in &r.records {
        write!(
            w,
            "{}  {:<width$}  k={:<3} n={:<4} residual {:>9.3e}  tol {:>7.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.k,
            c.trials,
            c.max_residual,
            c.tolerance,
        )?;
        match &c.detail {
            Some(d) => writeln!(w, "  {d}")?,
            None => writeln!(w)?,
        }
    }
    let failed = r.failures().count();
    writeln!(w, "{} checks, {} failed", r.records.len(), failed)
}

pub fn emit_report(r: &Report, extra: Option<Value>, fmt: OutFormat) -> io::Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match fmt {
        OutFormat::Json => {
            let mut v = serde_json::to_value(r).map_err(io::Error::other)?;
            if let (Some(Value::Object(extra)), Value::Object(obj)) = (extra, &mut v) {
                obj.extend(extra);
            }
            writeln!(w, "{}", serde_json::to_string_pretty(&v).map_err(io::Error::other)?)
        }
        OutFormat::Csv => report_csv(r, w),
        OutFormat::Pretty => report_pretty(r, w),
    }
}

/// Output of a computation: a JSON document, or a table for CSV and
/// pretty printing.
pub struct Table {
    pub title: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
    pub json: Value,
}

pub fn emit_table(t: &Table, fmt: OutFormat) -> io::Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match fmt {
        OutFormat::Json => writeln!(w, "{}", serde_json::to_string_pretty(&t.json).map_err(io::Error::other)?),
        OutFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(&t.header)?;
            for r in &t.rows {
                out.write_record(r)?;
            }
            out.flush()
        }
        OutFormat::Pretty => {
            writeln!(w, "{}", t.title)?;
            let widths: Vec<usize> = (0..t.header.len())
                .map(|i| t.rows.iter().map(|r| r[i].len()).chain([t.header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                cells.iter().zip(&widths).map(|(c, n)| format!("{c:<n$}")).collect::<Vec<_>>().join("  ")
            };
            writeln!(w, "{}", line(t.header.clone()).trim_end())?;
            for r in &t.rows {
                writeln!(w, "{}", line(r.iter().map(String::as_str).collect()).trim_end())?;
            }
            for f in &t.footer {
                writeln!(w, "{f}")?;
            }
            Ok(())
        }
    }
}
