//! Complete exponential sums evaluated exactly over residue systems.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::modular::{gcd, jacobi_symbol, mod_inverse, reduce};
use crate::arith::primes::is_prime;
use crate::error::{invalid, Error, Result};
use crate::numeric::sum::PairwiseAccumulator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SumKind {
    K,
    K2,
    Gauss,
    S1,
    S2,
    Crt,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpSumValue {
    pub re: f64,
    pub im: f64,
    pub modulus: u64,
    pub kind: SumKind,
}

impl ExpSumValue {
    pub(crate) fn new(z: Complex64, modulus: u64, kind: SumKind) -> Self {
        Self { re: z.re, im: z.im, modulus, kind }
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.complex().norm()
    }
}

/// `e(k/M)` for `0 <= k < M`.
pub struct RootTable {
    m: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(m: u64) -> Self {
        let roots = (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        Self { m, roots }
    }

    #[inline]
    pub fn e(&self, k: i128) -> Complex64 {
        self.roots[k.rem_euclid(self.m as i128) as usize]
    }
}

fn check_modulus(q: u64) -> Result<()> {
    if q <= 1 {
        return Err(invalid(format!("modulus {q} must be at least 2")));
    }
    Ok(())
}

/// `K(a, b; q) = sum_{(x,q)=1} e((a x + b xbar)/q)`.
pub fn kloosterman_k(a: i64, b: i64, q: u64) -> Result<ExpSumValue> {
    check_modulus(q)?;
    let t = RootTable::new(q);
    let mut acc = PairwiseAccumulator::new();
    for x in 1..q {
        if gcd(x, q) != 1 {
            continue;
        }
        let xb = mod_inverse(x as i64, q)? as i128;
        acc.add(t.e(a as i128 * x as i128 + b as i128 * xb));
    }
    Ok(ExpSumValue::new(acc.total(), q, SumKind::K))
}

/// `K_2(a, b; q) = sum_{(x,q)=1} e((a x + b xbar^2)/q)`.
pub fn k2_sum(a: i64, b: i64, q: u64) -> Result<ExpSumValue> {
    check_modulus(q)?;
    let t = RootTable::new(q);
    let mut acc = PairwiseAccumulator::new();
    for x in 1..q {
        if gcd(x, q) != 1 {
            continue;
        }
        let xb = mod_inverse(x as i64, q)? as i128;
        let xb2 = xb * xb % q as i128;
        acc.add(t.e(a as i128 * x as i128 + b as i128 * xb2));
    }
    Ok(ExpSumValue::new(acc.total(), q, SumKind::K2))
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// `sum_{h=1}^{p-1} (h/p) e(t h/p)`.
pub fn gauss_sum(t: i64, p: u64) -> Result<ExpSumValue> {
    check_odd_prime(p)?;
    let r = RootTable::new(p);
    Ok(ExpSumValue::new(gauss_with(&r, t, p), p, SumKind::Gauss))
}

fn gauss_with(r: &RootTable, t: i64, p: u64) -> Complex64 {
    let mut acc = PairwiseAccumulator::new();
    for h in 1..p {
        let chi = jacobi_symbol(h as i64, p).expect("odd modulus") as f64;
        acc.add(r.e(t as i128 * h as i128) * chi);
    }
    acc.total()
}

fn check_s1(p: u64, q: u64, m2: i64) -> Result<()> {
    check_odd_prime(p)?;
    if m2 == 0 {
        return Err(invalid("m2 must be nonzero"));
    }
    if (m2.unsigned_abs() as u128 * q as u128).is_multiple_of(p as u128) {
        return Err(Error::NotCoprime { a: p as i64, b: m2.unsigned_abs() * q, g: p });
    }
    Ok(())
}

/// `S_1(p, q, m2; b, c, d) = sum_{a,b,g mod p} ((m2 a^2 b - q g)/p) e((b a + c b + d g)/p)`
/// through `S_1 = G(-d qbar) S_2(p, q, m2; b, c, d)`.
pub fn s1_sum(p: u64, q: u64, m2: i64, b: i64, c: i64, d: i64) -> Result<ExpSumValue> {
    check_s1(p, q, m2)?;
    let r = RootTable::new(p);
    let qbar = mod_inverse(q as i64, p)? as i128;
    let g = gauss_with(&r, (-(d as i128) * qbar).rem_euclid(p as i128) as i64, p);
    let s2 = s2_delta(&r, p, q, m2, b, c, d);
    Ok(ExpSumValue::new(g * s2, p, SumKind::S1))
}

/// The defining triple sum, `O(p^3)`.
pub fn s1_literal(p: u64, q: u64, m2: i64, b: i64, c: i64, d: i64) -> Result<ExpSumValue> {
    check_s1(p, q, m2)?;
    let r = RootTable::new(p);
    let pi = p as i128;
    let legendre: Vec<f64> = (0..p).map(|x| jacobi_symbol(x as i64, p).unwrap() as f64).collect();
    let mut acc = PairwiseAccumulator::new();
    for al in 0..pi {
        let a2 = m2 as i128 * al * al % pi;
        for be in 0..pi {
            let x0 = a2 * be;
            for ga in 0..pi {
                let chi = legendre[(x0 - q as i128 * ga).rem_euclid(pi) as usize];
                if chi != 0.0 {
                    acc.add(r.e(b as i128 * al + c as i128 * be + d as i128 * ga) * chi);
                }
            }
        }
    }
    Ok(ExpSumValue::new(acc.total(), p, SumKind::S1))
}

/// Splits a prime power `r^f` into `(r, f)`.
pub fn prime_power(n: u64) -> Result<(u64, u32)> {
    let f = crate::arith::factor::factorize(n)?;
    match f.factors.as_slice() {
        [(r, e)] => Ok((*r, *e)),
        _ => Err(invalid(format!("{n} is not a prime power"))),
    }
}

fn check_s2(rf: u64, q: u64) -> Result<u64> {
    let (r, _) = prime_power(rf)?;
    if q.is_multiple_of(r) {
        return Err(Error::NotCoprime { a: r as i64, b: q, g: r });
    }
    Ok(r)
}

/// `S_2` as `sum_a e(b a / n) delta(c + d m2 qbar a^2, n)`, `O(n)`.
fn s2_delta(t: &RootTable, n: u64, q: u64, m2: i64, b: i64, c: i64, d: i64) -> Complex64 {
    let ni = n as i128;
    let qbar = mod_inverse(q as i64, n).expect("q coprime to n") as i128;
    let k = (d as i128 * m2 as i128).rem_euclid(ni) * qbar % ni;
    let mut acc = PairwiseAccumulator::new();
    for a in 0..ni {
        if (c as i128 + k * (a * a % ni)).rem_euclid(ni) == 0 {
            acc.add(t.e(b as i128 * a));
        }
    }
    acc.total() * n as f64
}

/// `S_2(r^f, q, m2; b, c, d) = sum_{r^f | m2 a^2 b - q g} e((b a + c b + d g)/r^f)`.
pub fn s2_sum(rf: u64, q: u64, m2: i64, b: i64, c: i64, d: i64) -> Result<ExpSumValue> {
    check_s2(rf, q)?;
    let t = RootTable::new(rf);
    Ok(ExpSumValue::new(s2_delta(&t, rf, q, m2, b, c, d), rf, SumKind::S2))
}

/// `S_2` by solving the congruence for `g`, `O(r^{2f})`.
pub fn s2_solve_gamma(rf: u64, q: u64, m2: i64, b: i64, c: i64, d: i64) -> Result<ExpSumValue> {
    check_s2(rf, q)?;
    let t = RootTable::new(rf);
    let n = rf as i128;
    let qbar = mod_inverse(q as i64, rf)? as i128;
    let mut acc = PairwiseAccumulator::new();
    for a in 0..n {
        let a2 = (m2 as i128).rem_euclid(n) * (a * a % n) % n;
        for be in 0..n {
            let ga = a2 * be % n * qbar % n;
            acc.add(t.e(b as i128 * a + c as i128 * be + d as i128 * ga));
        }
    }
    Ok(ExpSumValue::new(acc.total(), rf, SumKind::S2))
}

/// `S_2` over all triples with the divisibility filter, `O(r^{3f})`.
pub fn s2_literal(rf: u64, q: u64, m2: i64, b: i64, c: i64, d: i64) -> Result<ExpSumValue> {
    check_s2(rf, q)?;
    let t = RootTable::new(rf);
    let n = rf as i128;
    let mut acc = PairwiseAccumulator::new();
    for a in 0..n {
        for be in 0..n {
            for ga in 0..n {
                if (m2 as i128 * a * a * be - q as i128 * ga).rem_euclid(n) == 0 {
                    acc.add(t.e(b as i128 * a + c as i128 * be + d as i128 * ga));
                }
            }
        }
    }
    Ok(ExpSumValue::new(acc.total(), rf, SumKind::S2))
}

/// `gcd(n, x_1, ..., x_k)` with zero entries ignored.
pub fn gcd_many(n: u64, xs: &[i64]) -> u64 {
    xs.iter().fold(n, |g, &x| gcd(g, reduce(x, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn kloosterman_examples() {
        assert!((kloosterman_k(0, 0, 12).unwrap().re - 4.0).abs() < 1e-12);
        let k = kloosterman_k(1, 1, 5).unwrap();
        let expect = 2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((k.re - expect).abs() < 1e-12 && k.im.abs() < 1e-12);
        assert!(kloosterman_k(1, 1, 1).is_err());
    }

    #[test]
    fn k2_examples() {
        assert!((k2_sum(0, 0, 9).unwrap().re - 6.0).abs() < 1e-12);
        let v = k2_sum(1, 1, 3).unwrap().complex();
        // x = 1 gives e(2/3); x = 2 has xbar^2 = 1 and gives e(3/3) = 1
        let e23 = Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI / 3.0);
        assert!(close(v, e23 + 1.0, 1e-12), "{v}");
        let a = k2_sum(3, 5, 11).unwrap().complex();
        let b = k2_sum(-3, -5, 11).unwrap().complex();
        assert!(close(a, b.conj(), 1e-12));
    }

    #[test]
    fn gauss_examples() {
        assert!(gauss_sum(0, 7).unwrap().abs() < 1e-12);
        assert!((gauss_sum(1, 7).unwrap().abs() - 7f64.sqrt()).abs() < 1e-9);
        let g1 = gauss_sum(1, 11).unwrap().complex();
        for t in 1..11 {
            let chi = jacobi_symbol(t, 11).unwrap() as f64;
            assert!(close(gauss_sum(t, 11).unwrap().complex(), g1 * chi, 1e-12));
        }
        assert!(gauss_sum(1, 2).is_err());
    }

    #[test]
    fn s1_paths_agree() {
        for p in [3u64, 5, 7] {
            for (b, c, d) in [(0i64, 0i64, 0i64), (1, 2, 3), (0, 1, 1), (2, 0, 1), (1, 1, 0)] {
                let f = s1_sum(p, 4, 3, b, c, d);
                let (f, l) = match f {
                    Ok(f) => (f, s1_literal(p, 4, 3, b, c, d).unwrap()),
                    Err(_) => continue,
                };
                assert!(close(f.complex(), l.complex(), 1e-9), "p={p} {b} {c} {d}");
            }
        }
        assert!(s1_sum(3, 3, 1, 0, 0, 1).is_err());
    }

    #[test]
    fn s2_paths_agree() {
        for rf in [3u64, 4, 9, 8] {
            for (b, c, d) in [(0i64, 0i64, 0i64), (1, 2, 3), (0, 3, 1), (2, 0, 1), (1, 1, 0)] {
                let a = s2_sum(rf, 5, 7, b, c, d).unwrap().complex();
                let g = s2_solve_gamma(rf, 5, 7, b, c, d).unwrap().complex();
                let l = s2_literal(rf, 5, 7, b, c, d).unwrap().complex();
                assert!(close(a, g, 1e-9) && close(a, l, 1e-9), "rf={rf} {b} {c} {d}");
            }
        }
        // r | b, r | c, r | d m2 gives r^2
        assert!((s2_sum(5, 3, 10, 5, 10, 7).unwrap().re - 25.0).abs() < 1e-9);
        assert!(s2_sum(6, 5, 1, 0, 0, 0).is_err());
        assert!(s2_sum(3, 6, 1, 0, 0, 0).is_err());
    }
}
