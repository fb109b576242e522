//! The sums frakS[m](Y, q) and A[m](X, q), their closed forms and the
//! theorem main terms.

use serde::Serialize;

use crate::arith::factor::factorize;
use crate::arith::modular::gcd;
use crate::counters::local::interval_i;
use crate::error::{invalid, Error, Result};
use crate::multiplicative::euler::{euler_constant, EulerKind};
use crate::multiplicative::functions::{f_q_zero, gamma_an, gamma_ar, FqTable};
use crate::numeric::sum::CompensatedSum;
use crate::numeric::ApproxReal;

/// `quadratic Y^2 - linear Y + half_power Y^{1/2} + remainder`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MainTermBreakdown {
    pub quadratic: ApproxReal,
    pub linear: ApproxReal,
    pub half_power: ApproxReal,
    pub remainder: f64,
}

impl MainTermBreakdown {
    pub fn value(&self, y: f64) -> ApproxReal {
        self.quadratic.scale(y * y) - self.linear.scale(y) + self.half_power.scale(y.sqrt())
            + ApproxReal::exact(self.remainder)
    }
}

fn check(m: i64, q: u64) -> Result<()> {
    if m == 0 || q == 0 {
        return Err(invalid("m and q must be nonzero"));
    }
    let g = gcd(m.unsigned_abs(), q);
    if g != 1 {
        return Err(Error::NotCoprime { a: m, b: q, g });
    }
    if !factorize(m.unsigned_abs())?.is_squarefree() {
        return Err(Error::NotSquarefree(m));
    }
    Ok(())
}

/// Relative rounding of an FqTable entry (prefactor, C2 and the local
/// factors are each rounded once).
const TABLE_REL: f64 = 64.0 * f64::EPSILON;

/// `sum_{0 < l <= Y} f(l) (Y - l)` over a table covering `floor(Y)`.
fn frak_s_table(t: &FqTable, y: f64, c2_rel: f64) -> ApproxReal {
    if y < 1.0 {
        return ApproxReal::exact(0.0);
    }
    let top = y.floor() as usize;
    assert!(top <= t.len(), "table too short");
    let mut acc = CompensatedSum::new();
    for (i, &f) in t.as_slice()[..top].iter().enumerate() {
        acc.add(f * (y - (i + 1) as f64));
    }
    let err = acc.error_bound() + (TABLE_REL + c2_rel + 2.0 * f64::EPSILON) * acc.abs_sum();
    ApproxReal::new(acc.value(), err)
}

fn c2_rel() -> f64 {
    let c2 = euler_constant(EulerKind::C2, 1e-12).expect("C2");
    c2.abs_err / c2.value
}

/// `frakS[m](Y, q) = sum_{0 < l <= Y} f_q(l, m) (Y - l)`.
pub fn frak_s_exact(y: f64, q: u64, m: i64, eps: f64) -> Result<ApproxReal> {
    check(m, q)?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(invalid(format!("Y = {y} must be non-negative")));
    }
    let t = FqTable::new(m, q, y.floor() as usize)?;
    precision(frak_s_table(&t, y, c2_rel()), eps)
}

fn precision(v: ApproxReal, eps: f64) -> Result<ApproxReal> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if v.abs_err > eps * v.value.abs().max(1.0) {
        return Err(Error::PrecisionUnattainable { requested: eps, attainable: v.abs_err / v.value.abs().max(1.0) });
    }
    Ok(v)
}

/// The constants `(Lambda_2, Lambda_1, Lambda)` in the order they are printed:
/// `(phi(q)/q) C(q)^2`, `(phi(|m|q)/(|m|q)) C(|m|q)` and
/// `(C/2) Gamma_ar(m) prod_{p|q}(1+2/p)^{-1}`.
pub fn frak_s_constants(q: u64, m: i64, eps: f64) -> Result<[ApproxReal; 3]> {
    check(m, q)?;
    let e = eps.min(1e-12);
    let phi = factorize(q)?.profile().phi as f64;
    let cq = euler_constant(EulerKind::COfQ(q), e)?;
    let l2 = (cq * cq).scale(phi / q as f64);
    let l1 = f_q_zero(m, q, e)?;
    let c = euler_constant(EulerKind::C, e)?;
    let hall = euler_constant(EulerKind::HallFactor(q), e)?;
    let gar = gamma_ar(m)?;
    let l0 = (c * hall).scale(0.5 * gar);
    Ok([l2, l1, l0])
}

/// The closed form with the coefficients the exact sum actually follows:
/// `Lambda_2 Y^2 / 2 - Lambda_1 Y / 2 + Lambda Y^{1/2}`.
pub fn frak_s_formula(q: u64, m: i64, eps: f64) -> Result<MainTermBreakdown> {
    let [l2, l1, l0] = frak_s_constants(q, m, eps)?;
    Ok(MainTermBreakdown { quadratic: l2.scale(0.5), linear: l1.scale(0.5), half_power: l0, remainder: 0.0 })
}

/// The closed form with the coefficients exactly as printed,
/// `Lambda_2 Y^2 - Lambda_1 Y + Lambda Y^{1/2}`, kept for comparison reports.
pub fn frak_s_formula_printed(q: u64, m: i64, eps: f64) -> Result<MainTermBreakdown> {
    let [l2, l1, l0] = frak_s_constants(q, m, eps)?;
    Ok(MainTermBreakdown { quadratic: l2, linear: l1, half_power: l0, remainder: 0.0 })
}

fn check_a(x: f64, q: u64, m: i64) -> Result<()> {
    check(m, q)?;
    if !(x >= q as f64) || !x.is_finite() {
        return Err(invalid(format!("q = {q} exceeds X = {x}")));
    }
    Ok(())
}

fn l_range(x: f64, q: u64, m: i64) -> usize {
    ((m.unsigned_abs() + 1) as f64 * x / q as f64).floor() as usize + 1
}

/// `A[m](X, q) = sum_l f_q(l, m) |I(l)|` summed directly over l.
pub fn a_exact(x: f64, q: u64, m: i64, eps: f64) -> Result<ApproxReal> {
    check_a(x, q, m)?;
    let lmax = l_range(x, q, m);
    let t = FqTable::new(m, q, lmax)?;
    let mut acc = CompensatedSum::new();
    for l in 1..=lmax as i64 {
        let f = t.get(l);
        for s in [l, -l] {
            let len = interval_i(s, m, q, x)?.length();
            if len > 0.0 {
                acc.add(f * len);
            }
        }
    }
    let zero_len = interval_i(0, m, q, x)?.length();
    let f0 = f_q_zero(m, q, 1e-12)?;
    let rel = TABLE_REL + c2_rel() + 4.0 * f64::EPSILON;
    let head = ApproxReal::new(acc.value(), acc.error_bound() + rel * acc.abs_sum());
    precision(head + f0.scale(zero_len), eps)
}

/// A[m](X, q) through three values of frakS:
/// `m > 0`: `f_q(0,m) X/m + (q/m)[S(X/q) - S((m-1)X/q) + S(mX/q)]`;
/// `m < 0`: `(q/m)[S(X/q) + S(-mX/q) - S((1-m)X/q)]`.
pub fn a_decomposition(x: f64, q: u64, m: i64, eps: f64) -> Result<ApproxReal> {
    check_a(x, q, m)?;
    let t = FqTable::new(m, q, l_range(x, q, m))?;
    let c2r = c2_rel();
    let y = x / q as f64;
    let mf = m as f64;
    let s = |v: f64| frak_s_table(&t, v, c2r);
    let k = q as f64 / mf;
    let v = if m > 0 {
        let f0 = f_q_zero(m, q, 1e-12)?;
        f0.scale(x / mf) + (s(y) - s((mf - 1.0) * y) + s(mf * y)).scale(k)
    } else {
        (s(y) + s(-mf * y) - s((1.0 - mf) * y)).scale(k)
    };
    precision(v, eps)
}

/// `phi(q) (C(q) X/q)^2 + (C/2) Gamma_an(m) Gamma_ar(m) prod_{p|q}(1+2/p)^{-1}
/// (Xq)^{1/2}`.
pub fn a_formula(x: f64, q: u64, m: i64, eps: f64) -> Result<ApproxReal> {
    check_a(x, q, m)?;
    let t = theorem_main_terms(x, q, m, eps)?;
    Ok(t.s_main)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoremMainTerms {
    /// `phi(q) (C(q) X/q)^2 + M2_main`
    pub s_main: ApproxReal,
    /// The same with the printed leading coefficient `phi(q)/2`.
    pub s_main_printed: ApproxReal,
    /// `(C/2) Gamma_an(m) Gamma_ar(m) prod_{p|q}(1+2/p)^{-1} (Xq)^{1/2}`
    pub m2_main: ApproxReal,
}

pub fn theorem_main_terms(x: f64, q: u64, m: i64, eps: f64) -> Result<TheoremMainTerms> {
    check_a(x, q, m)?;
    let e = eps.min(1e-12);
    let [_, _, l0] = frak_s_constants(q, m, e)?;
    let m2 = l0.scale(gamma_an(m)? * (x * q as f64).sqrt());
    let phi = factorize(q)?.profile().phi as f64;
    let cq = euler_constant(EulerKind::COfQ(q), e)?;
    let t = cq.scale(x / q as f64);
    let lead = (t * t).scale(phi);
    Ok(TheoremMainTerms { s_main: lead + m2, s_main_printed: lead.scale(0.5) + m2, m2_main: m2 })
}
