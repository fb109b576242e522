//! Empirical constants for remainder terms of unknown size.
//!
//! A constant is fitted as twice the largest `|residual| / scale` seen on a
//! training grid, then asserted as a bound on a disjoint grid.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::report::VerificationRecord;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub c: f64,
    pub training_max: f64,
}

/// `c = 2 max |residual| / scale` over `(residual, scale)` pairs.
pub fn calibrate<I: IntoIterator<Item = (f64, f64)>>(train: I) -> Calibration {
    let max = train.into_iter().map(|(r, s)| r.abs() / s).fold(0.0, f64::max);
    Calibration { c: 2.0 * max, training_max: max }
}

impl Calibration {
    /// Bound record `|residual| <= c * scale`.
    pub fn record(&self, id: &str, params: BTreeMap<String, String>, residual: f64, scale: f64) -> VerificationRecord {
        VerificationRecord::bound(id, params, residual.abs(), self.c * scale)
    }
}
