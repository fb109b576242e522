//! Scans of the variance, correlation, Croft and Hooley statistics over moduli.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::is_squarefree;
use crate::arith::modular::gcd;
use crate::arith::sieve::squarefree_window;
use crate::asymptotics::theorem_main_terms;
use crate::counters::variance::{croft_variance_from, error_vector_from, variance_m2_from};
use crate::counters::{hooley_report, ResidueCounts};
use crate::error::{invalid, Error, Result};
use crate::report::fmt_float;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    Variance,
    Correlation,
    Croft,
    Hooley,
}

impl FromStr for ScanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "variance" => Ok(ScanKind::Variance),
            "correlation" => Ok(ScanKind::Correlation),
            "croft" => Ok(ScanKind::Croft),
            "hooley" => Ok(ScanKind::Hooley),
            _ => Err(invalid(format!("unknown scan kind '{s}'"))),
        }
    }
}

impl ScanKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanKind::Variance => "variance",
            ScanKind::Correlation => "correlation",
            ScanKind::Croft => "croft",
            ScanKind::Hooley => "hooley",
        }
    }
}

/// One `(X, q, m)` cell. `main_term` and `ratio` are absent for Croft rows;
/// for Hooley rows `statistic` is `max_a |E|` and `main_term` the envelope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub kind: ScanKind,
    pub x: u64,
    pub q: u64,
    pub m: i64,
    pub statistic: f64,
    pub main_term: Option<f64>,
    pub ratio: Option<f64>,
    pub error_budget: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    /// Cells skipped, with the reason.
    pub warnings: Vec<String>,
}

fn cell(kind: ScanKind, rc: &ResidueCounts, m: i64, eps: f64) -> Result<ScanRow> {
    let (x, q) = (rc.x, rc.q);
    let row = |statistic: f64, main: Option<f64>, budget: f64| ScanRow {
        kind,
        x,
        q,
        m,
        statistic,
        main_term: main,
        ratio: main.map(|t| statistic / t),
        error_budget: budget,
    };
    Ok(match kind {
        ScanKind::Variance | ScanKind::Correlation => {
            let r = variance_m2_from(rc, m, eps)?;
            let t = theorem_main_terms(x as f64, q, m, eps)?.m2_main;
            row(r.m2_exact.value, Some(t.value), r.m2_exact.abs_err + t.abs_err)
        }
        ScanKind::Croft => {
            let v = croft_variance_from(rc, eps)?;
            row(v.value, None, v.abs_err)
        }
        ScanKind::Hooley => {
            let ev = error_vector_from(rc, eps)?;
            let h = hooley_report(&ev);
            let budget = ev.errors.iter().map(|(_, e)| e.abs_err).fold(0.0, f64::max);
            row(h.max_abs_error, Some(h.envelope), budget)
        }
    })
}

/// Evaluates every `q` in `qs` at one `X`, sharing a single sieve. Moduli above
/// `X` or not coprime to `m` are skipped with a warning. Rows come back sorted
/// by `(X, q, m)`.
pub fn run_scan(kind: ScanKind, x: u64, qs: &[u64], m: i64, eps: f64) -> Result<ScanOutput> {
    if x == 0 {
        return Err(invalid("X must be positive"));
    }
    let m = if kind == ScanKind::Variance { 1 } else { m };
    if m == 0 || !is_squarefree(m.unsigned_abs()) {
        return Err(Error::NotSquarefree(m));
    }
    let mut out = ScanOutput::default();
    let mut keep = Vec::new();
    for &q in qs {
        if q == 0 || q > x {
            out.warnings.push(format!("skipping q={q}: must lie in [1, X={x}]"));
        } else if gcd(m.unsigned_abs(), q) != 1 {
            out.warnings.push(format!("skipping q={q}: not coprime to m={m}"));
        } else {
            keep.push(q);
        }
    }
    keep.sort_unstable();
    keep.dedup();
    let w = squarefree_window(1, x + 1)?;
    let rows: Result<Vec<ScanRow>> = keep
        .par_iter()
        .map(|&q| cell(kind, &ResidueCounts::from_window(&w, x, q)?, m, eps))
        .collect();
    out.rows = rows?;
    Ok(out)
}

/// `q = round(X^e)` for `e` from `lo` to `hi` in steps of `step`.
pub fn q_from_exponents(x: u64, lo: f64, hi: f64, step: f64) -> Result<Vec<u64>> {
    if !(step > 0.0) || !(lo <= hi) {
        return Err(invalid("exponent range needs lo <= hi and step > 0"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as u64;
    Ok((0..=n).map(|k| (x as f64).powf(lo + k as f64 * step).round().max(1.0) as u64).collect())
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "X", "q", "m", "statistic", "main_term", "ratio", "error_budget"])?;
    for r in rows {
        w.write_record([
            r.kind.as_str().to_string(),
            r.x.to_string(),
            r.q.to_string(),
            r.m.to_string(),
            fmt_float(r.statistic),
            opt(r.main_term),
            opt(r.ratio),
            fmt_float(r.error_budget),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scan_json<W: Write>(rows: &[ScanRow], out: W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(out, rows)
}
