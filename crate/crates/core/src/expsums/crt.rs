//! The mixed character sum over `u p1 p2` and its factorization by CRT.

use num_complex::Complex64;

use super::sums::{s1_sum, s2_sum, ExpSumValue, RootTable, SumKind};
use crate::arith::factor::factorize;
use crate::arith::modular::{gcd, jacobi_symbol, mod_inverse};
use crate::arith::primes::is_prime;
use crate::error::{invalid, Result};
use crate::numeric::sum::PairwiseAccumulator;
use crate::params;
use crate::report::VerificationRecord;

fn check(u: u64, p1: u64, p2: u64, q: u64, m2: i64) -> Result<()> {
    if u == 0 || p1 == p2 || !is_prime(p1) || !is_prime(p2) || p1 == 2 || p2 == 2 {
        return Err(invalid(format!("need u >= 1 and distinct odd primes, got u={u} p1={p1} p2={p2}")));
    }
    let all = (p1 * p2) as u128 * q as u128 * m2.unsigned_abs() as u128;
    if m2 == 0 || gcd(u, (all % u as u128) as u64) != 1 || (q * m2.unsigned_abs()).is_multiple_of(p1) || (q * m2.unsigned_abs()).is_multiple_of(p2) {
        return Err(invalid(format!("moduli overlap: u={u} p1={p1} p2={p2} q={q} m2={m2}")));
    }
    Ok(())
}

/// `S(u, p1 p2; l, m, n) = sum_{a,b,g mod N, u | m2 a^2 b - q g}
/// ((m2 a^2 b - q g)/(p1 p2)) e((l a + m b + n g)/N)`, `N = u p1 p2`,
/// regrouped by the residue of `m2 a^2 b`, `O(N^2)`.
pub fn crt_full_sum(u: u64, p1: u64, p2: u64, q: u64, m2: i64, l: i64, m: i64, n: i64) -> Result<ExpSumValue> {
    check(u, p1, p2, q, m2)?;
    let nn = u * p1 * p2;
    let ni = nn as i128;
    let t = RootTable::new(nn);
    let pp = p1 * p2;
    let chi: Vec<f64> = (0..pp).map(|x| jacobi_symbol(x as i64, pp).unwrap() as f64).collect();
    let qi = q as i128;
    let inner: Vec<Complex64> = (0..ni)
        .map(|x0| {
            let mut acc = PairwiseAccumulator::new();
            for g in 0..ni {
                let x = (x0 - qi * g).rem_euclid(ni);
                if x % u as i128 != 0 {
                    continue;
                }
                let c = chi[(x % pp as i128) as usize];
                if c != 0.0 {
                    acc.add(t.e(n as i128 * g) * c);
                }
            }
            acc.total()
        })
        .collect();
    let mut acc = PairwiseAccumulator::new();
    for a in 0..ni {
        let a2 = (m2 as i128 * a % ni * a).rem_euclid(ni);
        for b in 0..ni {
            let x0 = (a2 * b % ni) as usize;
            acc.add(t.e(l as i128 * a + m as i128 * b) * inner[x0]);
        }
    }
    Ok(ExpSumValue::new(acc.total(), nn, SumKind::Crt))
}

/// `S_1(p1) S_1(p2) prod_{r^f || u} S_2(r^f)` with the frequencies twisted by
/// the CRT idempotents.
pub fn crt_product(u: u64, p1: u64, p2: u64, q: u64, m2: i64, l: i64, m: i64, n: i64) -> Result<Complex64> {
    check(u, p1, p2, q, m2)?;
    let nn = u * p1 * p2;
    let twist = |k: u64| -> Result<[i64; 3]> {
        let inv = mod_inverse(((nn / k) % k) as i64, k)? as i128;
        let f = |x: i64| ((x as i128 * inv).rem_euclid(k as i128)) as i64;
        Ok([f(l), f(m), f(n)])
    };
    let mut prod = Complex64::new(1.0, 0.0);
    for p in [p1, p2] {
        let [b, c, d] = twist(p)?;
        prod *= s1_sum(p, q, m2, b, c, d)?.complex();
    }
    if u > 1 {
        for (r, f) in factorize(u)?.factors {
            let rf = r.pow(f);
            let [b, c, d] = twist(rf)?;
            prod *= s2_sum(rf, q, m2, b, c, d)?.complex();
        }
    }
    Ok(prod)
}

/// Equality of the full sum and the CRT product to `1e-6` relative.
pub fn crt_factor_check(u: u64, p1: u64, p2: u64, q: u64, m2: i64, l: i64, m: i64, n: i64) -> Result<VerificationRecord> {
    let full = crt_full_sum(u, p1, p2, q, m2, l, m, n)?.complex();
    let prod = crt_product(u, p1, p2, q, m2, l, m, n)?;
    let scale = full.norm().max(prod.norm()).max(1.0);
    Ok(VerificationRecord::bound(
        "expsums.crt_factorization",
        params! {"u" => u, "p1" => p1, "p2" => p2, "q" => q, "m2" => m2, "b" => l, "c" => m, "d" => n},
        (full - prod).norm(),
        1e-6 * scale,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_u_is_two_s1_values() {
        let r = crt_factor_check(1, 3, 5, 2, 1, 1, 2, 4).unwrap();
        assert!(r.pass, "{r:?}");
        // b = c = 0 leaves only alpha = 0 in each S_2 factor: |S_1(p)| = p^{3/2}
        let r = crt_factor_check(1, 3, 5, 2, 1, 0, 0, 4).unwrap();
        assert!(r.pass, "{r:?}");
        let prod = crt_product(1, 3, 5, 2, 1, 0, 0, 4).unwrap();
        assert!((prod.norm() - 15f64.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn sampled_tuple() {
        for (b, c, d) in [(1i64, 2i64, 3i64), (0, 0, 1), (5, 7, 11), (0, 3, 0)] {
            let r = crt_factor_check(4, 5, 7, 3, 1, b, c, d).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn zero_frequency_vanishes() {
        let v = crt_full_sum(3, 5, 7, 2, 1, 4, 9, 0).unwrap();
        assert!(v.abs() < 1e-6);
        assert!(crt_full_sum(3, 3, 7, 2, 1, 0, 0, 1).is_err());
        assert!(crt_full_sum(1, 7, 7, 2, 1, 0, 0, 1).is_err());
    }
}
