//! Error terms, variances and correlations of squarefree counts in residue
//! classes.

use serde::Serialize;

use crate::arith::factor::factorize;
use crate::arith::modular::{gcd, reduce};
use crate::arith::sieve::{squarefree_window, SieveWindow};
use crate::error::{invalid, Error, Result};
use crate::multiplicative::euler::{euler_constant, EulerKind};
use crate::numeric::dd::DoubleDouble as DD;
use crate::numeric::sum::CompensatedSum;
use crate::numeric::ApproxReal;
use crate::params;
use crate::report::VerificationRecord;

/// Squarefree counts `n <= X` per class mod q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueCounts {
    pub x: u64,
    pub q: u64,
    pub counts: Vec<u64>,
}

impl ResidueCounts {
    pub fn new(x: u64, q: u64) -> Result<Self> {
        check_xq(x, q)?;
        let w = squarefree_window(1, x + 1)?;
        Self::from_window(&w, x, q)
    }

    /// Reuses a sieve that covers `[1, X]`.
    pub fn from_window(w: &SieveWindow, x: u64, q: u64) -> Result<Self> {
        check_xq(x, q)?;
        if w.lo > 1 || w.hi <= x {
            return Err(invalid(format!("window [{}, {}) does not cover [1, {x}]", w.lo, w.hi)));
        }
        Ok(Self { x, q, counts: w.counts_by_residue(q, x) })
    }

    /// Coprime residues `a` in increasing order.
    pub fn coprime_residues(&self) -> impl Iterator<Item = u64> + '_ {
        let q = self.q;
        (0..q).filter(move |&a| gcd(a, q) == 1)
    }

    /// `sum_{n <= X, (n,q)=1} mu^2(n)`.
    pub fn coprime_total(&self) -> u64 {
        self.coprime_residues().map(|a| self.counts[a as usize]).sum()
    }
}

fn check_xq(x: u64, q: u64) -> Result<()> {
    if q == 0 {
        return Err(invalid("q must be positive"));
    }
    if q > x {
        return Err(invalid(format!("q = {q} exceeds X = {x}")));
    }
    Ok(())
}

fn check_m(m: i64, q: u64) -> Result<()> {
    if m == 0 {
        return Err(invalid("m must be nonzero"));
    }
    let g = gcd(m.unsigned_abs(), q);
    if g != 1 {
        return Err(Error::NotCoprime { a: m, b: q, g });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueErrorVector {
    pub x: u64,
    pub q: u64,
    pub counts: Vec<u64>,
    /// `C(q) X / q`
    pub main_term: ApproxReal,
    /// `(a, E(X, q, a))` for every residue coprime to q.
    pub errors: Vec<(u64, ApproxReal)>,
}

impl ResidueErrorVector {
    pub fn error(&self, a: u64) -> Option<ApproxReal> {
        self.errors.binary_search_by_key(&a, |&(b, _)| b).ok().map(|i| self.errors[i].1)
    }
}

/// `C(q) X / q` as an enclosure.
pub fn main_term(x: u64, q: u64, eps: f64) -> Result<ApproxReal> {
    let c = euler_constant(EulerKind::COfQ(q), eps)?;
    Ok(c.scale(x as f64 / q as f64))
}

pub fn error_vector(x: u64, q: u64, eps: f64) -> Result<ResidueErrorVector> {
    error_vector_from(&ResidueCounts::new(x, q)?, eps)
}

pub fn error_vector_from(rc: &ResidueCounts, eps: f64) -> Result<ResidueErrorVector> {
    let main = main_term(rc.x, rc.q, eps)?;
    let errors = rc
        .coprime_residues()
        .map(|a| (a, ApproxReal::exact(rc.counts[a as usize] as f64) - main))
        .collect();
    Ok(ResidueErrorVector { x: rc.x, q: rc.q, counts: rc.counts.clone(), main_term: main, errors })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub x: u64,
    pub q: u64,
    pub m: i64,
    /// The double sum S[m](X, q).
    pub s_exact: u128,
    /// `sum*_a E(X,q,a) E(X,q,ma)`
    pub m2_exact: ApproxReal,
    /// `|direct - reassembled| / max(|direct|, |reassembled|, 1)` for the
    /// developed-square identity.
    pub decomposition_residual: f64,
}

pub fn variance_m2(x: u64, q: u64, m: i64, eps: f64) -> Result<CorrelationResult> {
    variance_m2_from(&ResidueCounts::new(x, q)?, m, eps)
}

pub fn variance_m2_from(rc: &ResidueCounts, m: i64, eps: f64) -> Result<CorrelationResult> {
    check_m(m, rc.q)?;
    let q = rc.q;
    let main = main_term(rc.x, q, eps)?;
    let t = main.value;
    let mut acc = CompensatedSum::new();
    let mut abs_e = 0.0;
    let mut phi = 0u64;
    for a in rc.coprime_residues() {
        let b = (a as u128 * reduce(m, q) as u128 % q as u128) as u64;
        let ea = rc.counts[a as usize] as f64 - t;
        let eb = rc.counts[b as usize] as f64 - t;
        acc.add(ea * eb);
        abs_e += ea.abs() + eb.abs();
        phi += 1;
    }
    let m2 = acc.value();
    // E values are exact up to one rounding of count - t, and t is off by at
    // most main.abs_err.
    let d = main.abs_err + t.abs() * f64::EPSILON;
    let err = acc.error_bound() + d * abs_e + phi as f64 * d * d + 2.0 * f64::EPSILON * acc.abs_sum();
    let s = double_sum_from(rc, m)?;
    let reassembled = reassembled_m2(rc, s, t);
    let direct = DD::from_f64(m2);
    let scale = m2.abs().max(reassembled.abs().to_f64()).max(1.0);
    let resid = (direct - reassembled).abs().to_f64() / scale;
    Ok(CorrelationResult { x: rc.x, q, m, s_exact: s, m2_exact: ApproxReal::new(m2, err), decomposition_residual: resid })
}

/// `S - 2 T N + phi(q) T^2` in double-double, with `T` the main term and `N`
/// the coprime squarefree count.
fn reassembled_m2(rc: &ResidueCounts, s: u128, t: f64) -> DD {
    let n = rc.coprime_total();
    let phi = rc.coprime_residues().count() as f64;
    let t = DD::from_f64(t);
    DD::from_i128(s as i128) - t * DD::from_f64(n as f64) * 2.0 + t * t * phi
}

/// `#{(n1, n2): n_i <= X squarefree, (n1 n2, q) = 1, m n1 = n2 (mod q)}`.
pub fn double_sum_s(x: u64, q: u64, m: i64) -> Result<u128> {
    double_sum_from(&ResidueCounts::new(x, q)?, m)
}

pub fn double_sum_from(rc: &ResidueCounts, m: i64) -> Result<u128> {
    check_m(m, rc.q)?;
    let q = rc.q;
    let mr = reduce(m, q) as u128;
    Ok(rc
        .coprime_residues()
        .map(|a| {
            let b = (a as u128 * mr % q as u128) as usize;
            rc.counts[a as usize] as u128 * rc.counts[b] as u128
        })
        .sum())
}

/// Literal pair enumeration of the double sum (quadratic in X).
pub fn double_sum_brute(x: u64, q: u64, m: i64) -> u128 {
    let w = squarefree_window(1, x + 1).unwrap();
    let sf: Vec<u64> = w.iter().filter(|&n| gcd(n, q) == 1).collect();
    let mr = reduce(m, q);
    let mut total = 0u128;
    for &n1 in &sf {
        let target = (n1 as u128 * mr as u128 % q as u128) as u64;
        for &n2 in &sf {
            if n2 % q == target {
                total += 1;
            }
        }
    }
    total
}

/// The developed-square identity for the correlation, as a record.
pub fn dispersion_check(x: u64, q: u64, m: i64, eps: f64) -> Result<VerificationRecord> {
    dispersion_check_from(&ResidueCounts::new(x, q)?, m, eps)
}

pub fn dispersion_check_from(rc: &ResidueCounts, m: i64, eps: f64) -> Result<VerificationRecord> {
    let r = variance_m2_from(rc, m, eps)?;
    let main = main_term(rc.x, rc.q, eps)?;
    let re = reassembled_m2(rc, r.s_exact, main.value).to_f64();
    let scale = r.m2_exact.value.abs().max(re.abs()).max(1.0);
    Ok(VerificationRecord::check(
        "dispersion.developed_square",
        params! {"X" => rc.x, "q" => rc.q, "m" => m},
        r.m2_exact.value,
        re,
        1e-8 * scale,
    ))
}

/// Croft's variant summing over all residues with the density
/// `mu^2(d) (q0/phi(q0)) (6/pi^2) prod_{p|q} (1+1/p)^-1 X/q`, `d = (a,q)`,
/// `q0 = q/d`.
pub fn croft_variance(x: u64, q: u64, eps: f64) -> Result<ApproxReal> {
    croft_variance_from(&ResidueCounts::new(x, q)?, eps)
}

pub fn croft_variance_from(rc: &ResidueCounts, eps: f64) -> Result<ApproxReal> {
    let q = rc.q;
    let six = euler_constant(EulerKind::COfQ(1), eps)?;
    let fq = factorize(q)?;
    let mut local = 1.0;
    for p in fq.primes() {
        local *= p as f64 / (p + 1) as f64;
    }
    let base = six.scale(local * rc.x as f64 / q as f64);
    // expected value per divisor d of q
    let mut expected = std::collections::HashMap::new();
    for d in fq.divisors() {
        let fd = factorize(d)?;
        let v = if fd.is_squarefree() {
            let q0 = q / d;
            let phi0 = factorize(q0)?.profile().phi;
            base.scale(q0 as f64 / phi0 as f64)
        } else {
            ApproxReal::exact(0.0)
        };
        expected.insert(d, v);
    }
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    for a in 0..q {
        let e = expected[&gcd(a, q)];
        let diff = rc.counts[a as usize] as f64 - e.value;
        acc.add(diff * diff);
        err += 2.0 * diff.abs() * (e.abs_err + e.value.abs() * f64::EPSILON) + e.abs_err * e.abs_err;
    }
    Ok(ApproxReal::new(acc.value(), err + acc.error_bound() + 2.0 * f64::EPSILON * acc.abs_sum()))
}

/// `max_a |E(X,q,a)|` over coprime a and the envelope `(X/q)^{1/2} + q^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HooleyReport {
    pub max_abs_error: f64,
    pub envelope: f64,
    pub ratio: f64,
}

pub fn hooley_report(ev: &ResidueErrorVector) -> HooleyReport {
    let max = ev.errors.iter().map(|(_, e)| e.value.abs()).fold(0.0, f64::max);
    let env = (ev.x as f64 / ev.q as f64).sqrt() + (ev.q as f64).sqrt();
    HooleyReport { max_abs_error: max, envelope: env, ratio: max / env }
}
