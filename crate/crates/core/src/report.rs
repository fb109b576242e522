//! Check records and their CSV/JSON serialization.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Assert,
    ReportOnly,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Assert => "assert",
            Mode::ReportOnly => "report_only",
        }
    }
}

/// Outcome of one identity or bound check.
///
/// For assert-mode records `pass` is `|lhs - rhs| <= tolerance`, except for
/// exact rational checks where it reflects equality of the underlying
/// rationals. Report-only records always pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub mode: Mode,
    pub pass: bool,
}

/// Builds a parameter map from `key = value` pairs.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = ::std::collections::BTreeMap::new();
        $( m.insert(($k).to_string(), ($v).to_string()); )*
        m
    }};
}

impl VerificationRecord {
    pub fn check(id: impl Into<String>, params: BTreeMap<String, String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let pass = (lhs - rhs).abs() <= tol;
        Self {
            check_id: id.into(),
            params,
            lhs,
            rhs,
            tolerance: tol,
            mode: Mode::Assert,
            pass,
        }
    }

    /// `lhs <= rhs` style bound (stored as lhs, rhs with tolerance 0).
    pub fn bound(id: impl Into<String>, params: BTreeMap<String, String>, value: f64, limit: f64) -> Self {
        Self {
            check_id: id.into(),
            params,
            lhs: value,
            rhs: limit,
            tolerance: 0.0,
            mode: Mode::Assert,
            pass: value <= limit,
        }
    }

    /// Exact equality decided outside floating point.
    pub fn exact(id: impl Into<String>, params: BTreeMap<String, String>, lhs: f64, rhs: f64, equal: bool) -> Self {
        Self {
            check_id: id.into(),
            params,
            lhs,
            rhs,
            tolerance: 0.0,
            mode: Mode::Assert,
            pass: equal,
        }
    }

    pub fn report(id: impl Into<String>, params: BTreeMap<String, String>, lhs: f64, rhs: f64) -> Self {
        Self {
            check_id: id.into(),
            params,
            lhs,
            rhs,
            tolerance: f64::INFINITY,
            mode: Mode::ReportOnly,
            pass: true,
        }
    }

    pub fn failed(&self) -> bool {
        self.mode == Mode::Assert && !self.pass
    }

    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn sort_key(&self) -> (String, String) {
        (self.check_id.clone(), self.params_string())
    }
}

pub fn fmt_float(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

/// Sorts records into the canonical emission order.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by_cached_key(|r| r.sort_key());
}

pub fn write_csv<W: Write>(records: &[VerificationRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check_id", "params", "lhs", "rhs", "tol", "mode", "pass"])?;
    for r in records {
        w.write_record([
            r.check_id.as_str(),
            &r.params_string(),
            &fmt_float(r.lhs),
            &fmt_float(r.rhs),
            &fmt_float(r.tolerance),
            r.mode.as_str(),
            if r.pass { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[VerificationRecord], out: W) -> serde_json::Result<()> {
    // JSON has no infinity; report-only tolerances become null.
    let rows: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "check_id": r.check_id,
                "params": r.params,
                "lhs": finite_or_null(r.lhs),
                "rhs": finite_or_null(r.rhs),
                "tol": finite_or_null(r.tolerance),
                "mode": r.mode,
                "pass": r.pass,
            })
        })
        .collect();
    serde_json::to_writer_pretty(out, &rows)
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::Value::Null
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut recs = vec![
            VerificationRecord::check("b", params! {"q" => 7, "X" => 10}, 1.0, 1.0, 0.0),
            VerificationRecord::report("a", params! {}, 0.5, 2.0),
        ];
        sort_records(&mut recs);
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "check_id,params,lhs,rhs,tol,mode,pass");
        assert_eq!(lines[1], "a,,5.0000000000000000e-1,2.0000000000000000e0,inf,report_only,true");
        assert_eq!(lines[2], "b,X=10;q=7,1.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,assert,true");
    }

    #[test]
    fn failure_flags() {
        let r = VerificationRecord::check("x", params! {}, 1.0, 2.0, 0.5);
        assert!(r.failed());
        let r = VerificationRecord::report("x", params! {}, 1.0, 2.0);
        assert!(!r.failed());
        let r = VerificationRecord::bound("x", params! {}, 3.0, 2.0);
        assert!(r.failed());
    }

    #[test]
    fn json_is_valid() {
        let recs = vec![VerificationRecord::report("a", params! {"m" => -1}, 0.5, f64::NAN)];
        let mut buf = Vec::new();
        write_json(&recs, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["params"]["m"], "-1");
        assert!(v[0]["rhs"].is_null());
    }
}
