//! Verification suites and parameter scans behind the command-line front end.

pub mod batteries;
pub mod scan;

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::expsums::expsums_suite;
use crate::report::{sort_records, VerificationRecord};

pub use scan::{q_from_exponents, run_scan, write_scan_csv, write_scan_json, ScanKind, ScanOutput, ScanRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Expsums,
    Asymptotics,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "expsums" => Ok(Suite::Expsums),
            "asymptotics" => Ok(Suite::Asymptotics),
            "all" => Ok(Suite::All),
            _ => Err(invalid(format!("unknown suite '{s}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Expsums => "expsums",
            Suite::Asymptotics => "asymptotics",
            Suite::All => "all",
        })
    }
}

/// Runs a suite and returns its records in canonical order.
pub fn run_verify(suite: Suite, seed: u64, eps: f64) -> Result<Vec<VerificationRecord>> {
    if !(eps > 0.0) {
        return Err(invalid("precision must be positive"));
    }
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend(batteries::identities_battery(seed, eps)?);
    }
    if matches!(suite, Suite::Expsums | Suite::All) {
        out.extend(expsums_suite(seed)?);
    }
    if matches!(suite, Suite::Asymptotics | Suite::All) {
        out.extend(batteries::asymptotics_battery(eps)?);
    }
    sort_records(&mut out);
    Ok(out)
}

/// 0 when every assert-mode record passed, 1 otherwise.
pub fn exit_code(records: &[VerificationRecord]) -> i32 {
    if records.iter().any(|r| r.failed()) { 1 } else { 0 }
}
