//! Euler products over all primes with rigorous error bounds.
//!
//! A product `prod_p f(p)` with `f(p) = N(1/p) / D(1/p)` for integer
//! polynomials `N, D` with constant term 1 and no linear term is split at
//! `P0 = 1000`. The primes up to `P0` are multiplied directly in double-double.
//! For the rest,
//!
//! `ln prod_{p > P0} f(p) = sum_{k >= 2} a_k P_{>P0}(k)`,
//!
//! where `a_k` are the power-series coefficients of `ln N(x) - ln D(x)` and
//! `P_{>P0}(k) = P(k) - sum_{p <= P0} p^-k` is a tail of the prime zeta
//! function `P(k) = sum_j mu(j)/j ln zeta(jk)`. With `rho` bounding the
//! reciprocal roots of `N` and `D`, `|a_k| <= (deg N + deg D) rho^k / k` and
//! `P_{>P0}(k) <= P0^{1-k} / (k-1)`, which bounds the truncated series.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::factor::factorize;
use crate::arith::primes::{primes_up_to, shared_primes};
use crate::error::{invalid, Error, Result};
use crate::numeric::dd::{DoubleDouble as DD, DD_EPS};
use crate::numeric::zeta::{zeta_minus_one_dd, zeta_three_halves_dd};
use crate::numeric::ApproxReal;

const SPLIT: u64 = 1000;
const MAX_K: usize = 64;

/// An Euler factor `f(p) = N(1/p) / D(1/p)` with a declared decay
/// `|f(p) - 1| <= tail_coeff * p^-tail_exponent`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactor {
    pub name: &'static str,
    /// Coefficients of `N(x)`, lowest degree first; `num[0] = 1`.
    pub num: Vec<i64>,
    pub den: Vec<i64>,
    pub tail_exponent: u32,
    pub tail_coeff: f64,
}

/// `p^deg * C(1/p) = sum_k c_k p^{deg-k}`.
fn poly_in_p(coeffs: &[i64], deg: usize, p: i128) -> i128 {
    (0..=deg).fold(0i128, |acc, k| acc * p + coeffs.get(k).copied().unwrap_or(0) as i128)
}

impl LocalFactor {
    fn degree(&self) -> usize {
        self.num.len().max(self.den.len()) - 1
    }

    /// `(numerator, denominator)` of `f(p)` as integers.
    pub fn eval_int(&self, p: u64) -> (i128, i128) {
        let d = self.degree();
        let p = p as i128;
        (poly_in_p(&self.num, d, p), poly_in_p(&self.den, d, p))
    }

    pub fn eval_rational(&self, p: u64) -> BigRational {
        let (n, d) = self.eval_int(p);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn eval_dd(&self, p: u64) -> DD {
        let (n, d) = self.eval_int(p);
        DD::from_i128(n) / DD::from_i128(d)
    }

    pub fn eval_f64(&self, p: u64) -> f64 {
        self.eval_dd(p).to_f64()
    }

    /// Whether the declared decay bound holds at `p` (checked exactly).
    pub fn bound_holds(&self, p: u64) -> bool {
        let diff = (self.eval_rational(p) - BigRational::one()).abs();
        let c = BigRational::from_float(self.tail_coeff).unwrap();
        let bound = c / BigRational::from_integer(BigInt::from(p).pow(self.tail_exponent));
        diff <= bound
    }

    /// Upper bound on the moduli of the reciprocal roots of N and D.
    fn rho(&self) -> f64 {
        let s = |c: &[i64]| c.iter().skip(1).map(|x| x.unsigned_abs() as f64).sum::<f64>();
        s(&self.num).max(s(&self.den)).max(1.0)
    }

    /// Power-series coefficients of `ln N(x) - ln D(x)` up to `x^kmax`.
    fn log_coefficients(&self, kmax: usize) -> Vec<DD> {
        let l_n = log_series(&self.num, kmax);
        let l_d = log_series(&self.den, kmax);
        l_n.iter().zip(&l_d).map(|(a, b)| *a - *b).collect()
    }
}

/// `ln P(x)` coefficients for `P = 1 + c_1 x + ...`, via
/// `n L_n = n c_n - sum_{k<n} k L_k c_{n-k}`.
fn log_series(c: &[i64], kmax: usize) -> Vec<DD> {
    assert_eq!(c[0], 1, "polynomial must have constant term 1");
    let coef = |i: usize| DD::from_f64(c.get(i).copied().unwrap_or(0) as f64);
    let mut l = vec![DD::ZERO; kmax + 1];
    for n in 1..=kmax {
        let mut acc = coef(n) * n as f64;
        for k in 1..n {
            let cn = c.get(n - k).copied().unwrap_or(0);
            if cn != 0 {
                acc -= l[k] * (k as f64) * (cn as f64);
            }
        }
        l[n] = acc / n as f64;
    }
    l
}

struct PrimeZetaTails {
    /// `P_{>SPLIT}(k)` and its error for `k = 0..=MAX_K` (entries 0, 1 unused).
    values: Vec<(DD, f64)>,
}

fn prime_zeta_tails() -> &'static PrimeZetaTails {
    static T: OnceLock<PrimeZetaTails> = OnceLock::new();
    T.get_or_init(|| {
        let mobius = crate::arith::sieve::mobius_table(64);
        let small = primes_up_to(SPLIT);
        let mut values = vec![(DD::ZERO, 0.0); MAX_K + 1];
        for (k, slot) in values.iter_mut().enumerate().skip(2) {
            let bound = (SPLIT as f64).powi(1 - k as i32) / (k as f64 - 1.0);
            if bound < 1e-300 {
                *slot = (DD::ZERO, bound);
                continue;
            }
            // P(k) = sum_j mu(j)/j ln zeta(jk); truncate once 3*2^{-jk} is negligible
            let jmax = (130 / k).max(1);
            let mut pk = DD::ZERO;
            let mut err = 0.0;
            for (j, &mu) in mobius.iter().enumerate().take(jmax + 1).skip(1) {
                if mu == 0 {
                    continue;
                }
                let (zm1, e) = zeta_minus_one_dd(DD::from_f64((j * k) as f64));
                let lz = zm1.ln_1p();
                pk += lz * (mu as f64) / (j as f64);
                err += e / j as f64;
            }
            err += 6.0 * 2f64.powi(-(((jmax + 1) * k) as i32));
            let mut partial = DD::ZERO;
            for &p in small.iter().rev() {
                partial += DD::from_f64(p as f64).powi(-(k as i32));
            }
            let tail = pk - partial;
            err += (pk.abs().to_f64() + partial.abs().to_f64()) * DD_EPS * 8.0;
            // the tail is positive and below the integral bound
            let v = if tail.hi < 0.0 { DD::ZERO } else { tail };
            *slot = (v, err);
        }
        PrimeZetaTails { values }
    })
}

/// `prod_p f(p)` in double-double with an absolute error bound.
pub fn euler_product_dd(f: &LocalFactor) -> (DD, f64) {
    let primes = shared_primes(SPLIT);
    let mut finite = DD::ONE;
    let mut nprimes = 0usize;
    for &p in primes.iter().take_while(|&&p| p <= SPLIT) {
        finite *= f.eval_dd(p);
        nprimes += 1;
    }
    let rounding_rel = (4 * nprimes + 64) as f64 * DD_EPS;

    let rho = f.rho();
    let deg = (f.num.len() + f.den.len() - 2) as f64;
    let ratio = rho / SPLIT as f64;
    assert!(ratio < 0.5, "factor grows too fast for the prime zeta tail");
    // smallest K with the geometric tail bound below 1e-34
    let mut kmax = 2;
    let tail_term = |k: usize| deg * rho.powi(k as i32) / k as f64 * (SPLIT as f64).powi(1 - k as i32) / (k as f64 - 1.0);
    while kmax < MAX_K && tail_term(kmax + 1) / (1.0 - ratio) > 1e-34 {
        kmax += 1;
    }
    let series_tail = tail_term(kmax + 1) / (1.0 - ratio);

    let a = f.log_coefficients(kmax);
    assert!(a[1].hi == 0.0 && a[1].lo == 0.0, "local factor has a linear term");
    let tails = &prime_zeta_tails().values;
    let mut t = DD::ZERO;
    let mut t_err = series_tail;
    for k in 2..=kmax {
        let (pk, e) = tails[k];
        t += a[k] * pk;
        t_err += a[k].abs().to_f64() * e + (a[k] * pk).abs().to_f64() * DD_EPS * 4.0;
    }
    let value = finite * t.exp();
    // |e^{t+d} - e^t| <= e^t (e^|d| - 1)
    let err = value.abs().to_f64() * ((t_err.exp_m1()) * 1.01 + rounding_rel);
    (value, err)
}

/// Naive truncated product over `p <= bound`, with the rigorous tail
/// enclosure `|prod_{p > P} f(p) - 1| <= exp(2 c S) - 1`,
/// `S = P^{1-t}/(t-1)`. Used as an independent check of `euler_product_dd`.
pub fn truncated_product(f: &LocalFactor, bound: u64) -> ApproxReal {
    let primes = shared_primes(bound);
    let mut count = 0u64;
    let mut value = DD::ONE;
    for &p in primes.iter().take_while(|&&p| p <= bound) {
        value *= f.eval_dd(p);
        count += 1;
    }
    let t = f.tail_exponent as f64;
    let s = (bound as f64).powf(1.0 - t) / (t - 1.0);
    let tail = (2.0 * f.tail_coeff * s).exp_m1();
    let v = value.to_f64();
    ApproxReal::new(v, v.abs() * (tail + (4 * count + 16) as f64 * DD_EPS) + v.abs() * f64::EPSILON)
}

pub mod factors {
    use super::LocalFactor;

    /// `1 - 2/p^2`
    pub fn twin_squarefree() -> LocalFactor {
        LocalFactor { name: "1-2p^-2", num: vec![1, 0, -2], den: vec![1], tail_exponent: 2, tail_coeff: 2.0 }
    }

    /// `1 - 1/p^2`
    pub fn inverse_zeta_two() -> LocalFactor {
        LocalFactor { name: "1-p^-2", num: vec![1, 0, -1], den: vec![1], tail_exponent: 2, tail_coeff: 1.0 }
    }

    /// `(p^3 - 3p + 2) / p^3`
    pub fn variance_core() -> LocalFactor {
        LocalFactor { name: "(p^3-3p+2)/p^3", num: vec![1, 0, -3, 2], den: vec![1], tail_exponent: 2, tail_coeff: 3.0 }
    }

    /// `(p^3 - 3p + 2) / (p (p^2 - 2)) = 1 - (p-2)/(p(p^2-2))`
    pub fn beta_over_d() -> LocalFactor {
        LocalFactor {
            name: "(p^3-3p+2)/(p(p^2-2))",
            num: vec![1, 0, -3, 2],
            den: vec![1, 0, -2],
            tail_exponent: 2,
            tail_coeff: 2.0,
        }
    }

    /// `(p^2 - 1) / (p^2 - 2)`
    pub fn h_over_d2() -> LocalFactor {
        LocalFactor { name: "(p^2-1)/(p^2-2)", num: vec![1, 0, -1], den: vec![1, 0, -2], tail_exponent: 2, tail_coeff: 2.0 }
    }

    /// `(p^2 - 1)^2 / (p^2 (p^2 - 2))`
    pub fn h_over_d4() -> LocalFactor {
        LocalFactor {
            name: "(p^2-1)^2/(p^2(p^2-2))",
            num: vec![1, 0, -2, 0, 1],
            den: vec![1, 0, -2],
            tail_exponent: 4,
            tail_coeff: 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EulerKind {
    /// `zeta(3/2)/pi * prod (p^3-3p+2)/p^3`
    C,
    /// `prod (1 - 2p^-2)`
    C2,
    /// `zeta(3/2)/(2 pi) * prod (p^3-3p+2)/(p(p^2-2))`
    CPrime,
    /// `6/pi^2 * prod_{p|q} (1 - p^-2)^-1`
    COfQ(u64),
    /// `sum_{(d,r)=1} h(d)/d^2`
    SumHD2(u64),
    /// `sum_{(d,r)=1} h(d)/d^4`
    SumHD4(u64),
    /// `sum_{(d,r)=1} beta(d)/d`
    CBeta(u64),
    /// `prod_{p|q} (1 + 2/p)^-1`
    HallFactor(u64),
}

fn full_products() -> &'static [(DD, f64); 5] {
    static V: OnceLock<[(DD, f64); 5]> = OnceLock::new();
    V.get_or_init(|| {
        [
            euler_product_dd(&factors::twin_squarefree()),
            euler_product_dd(&factors::variance_core()),
            euler_product_dd(&factors::beta_over_d()),
            euler_product_dd(&factors::h_over_d2()),
            euler_product_dd(&factors::h_over_d4()),
        ]
    })
}

fn prime_divisors_of(r: u64) -> Result<Vec<u64>> {
    if r == 0 {
        return Err(invalid("modulus must be positive"));
    }
    Ok(factorize(r)?.primes().collect())
}

/// `prod_{p|r} f(p)^-1` in double-double.
fn remove_primes(f: &LocalFactor, r: u64) -> Result<DD> {
    let mut acc = DD::ONE;
    for p in prime_divisors_of(r)? {
        let (n, d) = f.eval_int(p);
        acc = acc * DD::from_i128(d) / DD::from_i128(n);
    }
    Ok(acc)
}

/// `6/pi^2` in double-double.
pub fn six_over_pi_squared() -> DD {
    DD::from_f64(6.0) / (DD::PI * DD::PI)
}

/// The constant in double-double with an absolute error bound.
pub fn euler_constant_dd(kind: EulerKind) -> Result<(DD, f64)> {
    let full = full_products();
    let (z, ze) = zeta_three_halves_dd();
    let scale = |(v, e): (DD, f64), s: DD| -> (DD, f64) {
        let val = v * s;
        (val, e * s.abs().to_f64() + val.abs().to_f64() * 16.0 * DD_EPS)
    };
    Ok(match kind {
        EulerKind::C2 => full[0],
        EulerKind::C => {
            let (core, e) = full[1];
            let v = z / DD::PI * core;
            (v, e * z.to_f64() / std::f64::consts::PI + ze * core.to_f64() / 3.0 + v.abs().to_f64() * 16.0 * DD_EPS)
        }
        EulerKind::CPrime => {
            let (core, e) = full[2];
            let v = z / (DD::PI * 2.0) * core;
            (v, e * z.to_f64() / 6.0 + ze * core.to_f64() / 6.0 + v.abs().to_f64() * 16.0 * DD_EPS)
        }
        EulerKind::COfQ(q) => {
            let mut v = six_over_pi_squared();
            for p in prime_divisors_of(q)? {
                let p2 = DD::from_f64((p * p) as f64);
                v = v * p2 / (p2 - 1.0);
            }
            (v, v.abs().to_f64() * 64.0 * DD_EPS)
        }
        EulerKind::SumHD2(r) => scale(full[3], remove_primes(&factors::h_over_d2(), r)?),
        EulerKind::SumHD4(r) => scale(full[4], remove_primes(&factors::h_over_d4(), r)?),
        EulerKind::CBeta(r) => scale(full[2], remove_primes(&factors::beta_over_d(), r)?),
        EulerKind::HallFactor(q) => {
            let mut v = DD::ONE;
            for p in prime_divisors_of(q)? {
                v = v * (p as f64) / ((p + 2) as f64);
            }
            (v, v.abs().to_f64() * 64.0 * DD_EPS)
        }
    })
}

/// The constant rounded to f64, with `abs_err <= eps`.
pub fn euler_constant(kind: EulerKind, eps: f64) -> Result<ApproxReal> {
    if !(eps > 0.0) {
        return Err(invalid(format!("precision target must be positive, got {eps}")));
    }
    let (v, e) = euler_constant_dd(kind)?;
    let a = ApproxReal::from_dd(v, e);
    if a.abs_err > eps {
        return Err(Error::PrecisionUnattainable { requested: eps, attainable: a.abs_err });
    }
    Ok(a)
}

/// Plain f64 value of a constant (for hot loops that carry their own error
/// accounting).
pub fn constant_f64(kind: EulerKind) -> f64 {
    euler_constant_dd(kind).expect("valid kind").0.to_f64()
}

/// Exact rational value of a finite local product `prod_{p|n} f(p)`.
pub fn finite_product(f: &LocalFactor, n: u64) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for p in prime_divisors_of(n)? {
        acc *= f.eval_rational(p);
    }
    Ok(acc)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_series_of_one_minus_x() {
        // ln(1 - x) = -sum x^k / k
        let l = log_series(&[1, -1], 6);
        for k in 1..=6 {
            assert!((l[k].to_f64() + 1.0 / k as f64).abs() < 1e-30);
        }
    }

    #[test]
    fn eval_int_matches_definition() {
        let f = factors::h_over_d4();
        let (n, d) = f.eval_int(3);
        // (9-1)^2 / (9 * 7)
        assert_eq!(BigRational::new(n.into(), d.into()), BigRational::new(64.into(), 63.into()));
    }

    #[test]
    fn six_over_pi_squared_from_product() {
        let (v, e) = euler_product_dd(&factors::inverse_zeta_two());
        let expect = six_over_pi_squared();
        assert!((v - expect).abs().to_f64() <= e + 1e-30, "{:?} vs {:?} (err {e})", v, expect);
        assert!(e < 1e-26);
    }

    #[test]
    fn c2_reference() {
        // Twin-squarefree constant 0.32263409893924467...
        let c2 = euler_constant(EulerKind::C2, 1e-12).unwrap();
        assert!((c2.value - 0.322_634_098).abs() < 1e-9);
    }

    #[test]
    fn declared_bounds_hold() {
        let all = [
            factors::twin_squarefree(),
            factors::inverse_zeta_two(),
            factors::variance_core(),
            factors::beta_over_d(),
            factors::h_over_d2(),
            factors::h_over_d4(),
        ];
        for f in &all {
            for &p in primes_up_to(2000).iter() {
                assert!(f.bound_holds(p), "{} at {p}", f.name);
            }
        }
    }

    #[test]
    fn rejects_bad_precision() {
        assert!(euler_constant(EulerKind::C2, 0.0).is_err());
        assert!(matches!(
            euler_constant(EulerKind::C2, 1e-30),
            Err(Error::PrecisionUnattainable { .. })
        ));
    }
}
