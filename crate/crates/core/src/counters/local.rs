//! The interval I(l), the local densities u_p(l) and the counts N_d(l).

use serde::Serialize;

use crate::arith::factor::{factorize, factorize_abs};
use crate::arith::primes::is_prime;
use crate::arith::modular::gcd;
use crate::error::{invalid, Error, Result};

/// `{n in (0, X) : mn + lq in (0, X)}` as an open interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntervalIL {
    pub l: i64,
    pub m: i64,
    pub q: u64,
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

impl IntervalIL {
    pub fn length(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    /// Exact membership test, independent of the endpoint arithmetic.
    pub fn contains(&self, n: f64) -> bool {
        let k = self.m as f64 * n + self.l as f64 * self.q as f64;
        n > 0.0 && n < self.x && k > 0.0 && k < self.x
    }
}

pub fn interval_i(l: i64, m: i64, q: u64, x: f64) -> Result<IntervalIL> {
    if m == 0 {
        return Err(invalid("m must be nonzero"));
    }
    if q == 0 || !(x > 0.0) {
        return Err(invalid("q and X must be positive"));
    }
    let lq = l as f64 * q as f64;
    let mf = m as f64;
    let (a, b) = if m > 0 { (-lq / mf, (x - lq) / mf) } else { ((x - lq) / mf, -lq / mf) };
    let lo = a.max(0.0);
    let hi = b.min(x).max(lo);
    Ok(IntervalIL { l, m, q, x, lo, hi })
}

/// `#{v mod p^2 : p^2 | v or p^2 | mv + lq}` from the case table.
pub fn u_p_local(p: u64, l: i64, m: i64, q: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    if q.is_multiple_of(p) {
        return Err(Error::NotCoprime { a: p as i64, b: q, g: p });
    }
    if m == 0 || !factorize_abs(m)?.is_squarefree() {
        return Err(Error::NotSquarefree(m));
    }
    let pi = p as i128;
    let l = l as i128;
    let p_m = (m as i128) % pi == 0;
    let p2_l = l % (pi * pi) == 0;
    let p_l = l % pi == 0;
    Ok(match (p_m, p2_l, p_l) {
        (true, true, _) => p,
        (true, false, true) => p + 1,
        (true, false, false) => 1,
        (false, true, _) => 1,
        (false, false, _) => 2,
    })
}

/// Literal count over the `p^2` residues.
pub fn u_p_brute(p: u64, l: i64, m: i64, q: u64) -> u64 {
    let p2 = (p * p) as i128;
    let shift = l as i128 * q as i128;
    (0..p2).filter(|&v| v == 0 || (m as i128 * v + shift).rem_euclid(p2) == 0).count() as u64
}

/// `U_d(l) = prod_{p | d} u_p(l)`.
pub fn u_d(d: u64, l: i64, m: i64, q: u64) -> Result<u64> {
    let f = factorize(d)?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(d as i64));
    }
    let mut u = 1;
    for p in f.primes() {
        u *= u_p_local(p, l, m, q)?;
    }
    Ok(u)
}

/// `N_d(l)` together with the main term `(phi(q)/q) U_d(l) |I(l)| / d^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NdCount {
    pub count: u64,
    pub main_term: f64,
    pub residual: f64,
}

/// `#{n in I(l) : (n, q) = 1, d | sigma(n) sigma(mn + lq)}` where `sigma(n)`
/// is the product of the primes whose square divides n.
pub fn n_d_count(d: u64, l: i64, m: i64, q: u64, x: u64) -> Result<NdCount> {
    let fd = factorize(d)?;
    if !fd.is_squarefree() {
        return Err(Error::NotSquarefree(d as i64));
    }
    let g = gcd(d, q);
    if g != 1 {
        return Err(Error::NotCoprime { a: d as i64, b: q, g });
    }
    let iv = interval_i(l, m, q, x as f64)?;
    let sq: Vec<i128> = fd.primes().map(|p| (p * p) as i128).collect();
    let (mi, shift, xi) = (m as i128, l as i128 * q as i128, x as i128);
    let mut count = 0u64;
    if !iv.is_empty() {
        let start = (iv.lo.floor() as i128).max(1);
        let end = (iv.hi.ceil() as i128).min(xi - 1);
        for n in start..=end {
            let k = mi * n + shift;
            if k <= 0 || k >= xi || gcd(n as u64, q) != 1 {
                continue;
            }
            if sq.iter().all(|&p2| n % p2 == 0 || k % p2 == 0) {
                count += 1;
            }
        }
    }
    let phi = factorize(q)?.profile().phi as f64;
    // the brute count agrees with the case table and needs no squarefree m
    let ud: u64 = fd.primes().map(|p| u_p_brute(p, l, m, q)).product();
    let main = phi / q as f64 * ud as f64 * iv.length() / (d as f64 * d as f64);
    Ok(NdCount { count, main_term: main, residual: count as f64 - main })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_examples() {
        let i = interval_i(0, 1, 5, 10.0).unwrap();
        assert_eq!((i.lo, i.hi, i.length()), (0.0, 10.0, 10.0));
        let i = interval_i(1, 2, 3, 10.0).unwrap();
        assert_eq!((i.lo, i.hi), (0.0, 3.5));
        let i = interval_i(-4, 2, 3, 10.0).unwrap();
        assert_eq!((i.lo, i.hi), (6.0, 10.0));
        let i = interval_i(1, -2, 3, 10.0).unwrap();
        assert_eq!((i.lo, i.hi), (0.0, 1.5));
        let i = interval_i(12, 2, 3, 10.0).unwrap();
        assert!(i.is_empty() && i.length() == 0.0);
        assert!(interval_i(1, 0, 3, 10.0).is_err());
    }

    #[test]
    fn interval_membership_sampling() {
        for m in [-3i64, -1, 1, 2, 5] {
            for l in -20i64..=20 {
                let iv = interval_i(l, m, 7, 30.0).unwrap();
                for k in 1..600 {
                    let n = k as f64 * 0.05 + 0.0125;
                    let inside = n > iv.lo && n < iv.hi;
                    assert_eq!(inside, iv.contains(n), "m={m} l={l} n={n}");
                }
                if l.unsigned_abs() as f64 > (m.unsigned_abs() + 1) as f64 * 30.0 / 7.0 {
                    assert!(iv.is_empty());
                }
            }
        }
    }

    #[test]
    fn u_p_cases() {
        assert_eq!(u_p_local(3, 18, 3, 2).unwrap(), 3);
        assert_eq!(u_p_local(3, 9, 6, 5).unwrap(), 3);
        assert_eq!(u_p_local(3, 6, 3, 2).unwrap(), 4);
        assert_eq!(u_p_local(3, 5, 3, 2).unwrap(), 1);
        assert_eq!(u_p_local(5, 25, 3, 2).unwrap(), 1);
        assert_eq!(u_p_local(5, 7, 3, 2).unwrap(), 2);
        assert!(u_p_local(3, 1, 1, 6).is_err());
        assert!(u_p_local(4, 1, 1, 7).is_err());
        assert!(u_p_local(3, 1, 4, 7).is_err());
    }

    #[test]
    fn nd_examples() {
        assert_eq!(n_d_count(2, 0, 1, 3, 10).unwrap().count, 2);
        // d = 1 counts the coprime integers of I(l)
        let c = n_d_count(1, 1, 2, 3, 10).unwrap();
        assert_eq!(c.count, 2); // n in {1, 2}
        assert!(n_d_count(3, 0, 1, 3, 10).is_err());
        assert_eq!(u_d(6, 4, 5, 7).unwrap(), u_p_local(2, 4, 5, 7).unwrap() * u_p_local(3, 4, 5, 7).unwrap());
    }
}
