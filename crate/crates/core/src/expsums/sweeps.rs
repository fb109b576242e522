//! Exhaustive and sampled sweeps over the exponential-sum identities and
//! bounds, one record per parameter tuple.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::crt::crt_factor_check;
use super::sums::{gauss_sum, gcd_many, kloosterman_k, prime_power, s1_literal, s1_sum, s2_sum};
use crate::arith::modular::gcd;
use crate::arith::primes::primes_up_to;
use crate::error::Result;
use crate::params;
use crate::report::VerificationRecord;

/// Relative slack for floating evaluation of the exact bounds.
const FLOAT_REL: f64 = 1e-9;

const QM_SAMPLES: [(u64, i64); 4] = [(1, 1), (2, 3), (5, -7), (12, 5)];

fn odd_primes(upto: u64) -> Vec<u64> {
    primes_up_to(upto).into_iter().filter(|&p| p > 2).collect()
}

fn coprime_samples(n: u64) -> Vec<(u64, i64)> {
    QM_SAMPLES.iter().copied().filter(|&(q, m2)| gcd(q * m2.unsigned_abs(), n) == 1).collect()
}

fn residues(n: u64) -> impl Iterator<Item = i64> {
    0..n as i64
}

/// `S_1(p; b, c, 0) = 0` by the literal triple sum, every `b, c` for odd `p <= pmax`.
pub fn zero_identity(pmax: u64) -> Result<Vec<VerificationRecord>> {
    let tuples: Vec<(u64, u64, i64)> = odd_primes(pmax)
        .into_iter()
        .flat_map(|p| coprime_samples(p).into_iter().map(move |(q, m2)| (p, q, m2)))
        .collect();
    tuples
        .into_par_iter()
        .map(|(p, q, m2)| {
            let mut worst = 0.0f64;
            for b in residues(p) {
                for c in residues(p) {
                    worst = worst.max(s1_literal(p, q, m2, b, c, 0)?.abs());
                }
            }
            Ok(VerificationRecord::bound(
                "expsums.s1_vanishes_at_d_zero",
                params! {"p" => p, "q" => q, "m2" => m2},
                worst,
                FLOAT_REL * (p * p * p) as f64,
            ))
        })
        .collect()
}

/// `|S_1| <= 2 p^{3/2}` over all `(b, c, d)`, plus agreement of the literal
/// and factored evaluations.
pub fn s1_bounds(primes: &[u64]) -> Result<Vec<VerificationRecord>> {
    let tuples: Vec<(u64, u64, i64)> = primes
        .iter()
        .flat_map(|&p| coprime_samples(p).into_iter().map(move |(q, m2)| (p, q, m2)))
        .collect();
    let out: Result<Vec<Vec<VerificationRecord>>> = tuples
        .into_par_iter()
        .map(|(p, q, m2)| {
            let limit = 2.0 * (p as f64).powf(1.5);
            let mut worst = 0.0f64;
            let mut gap = 0.0f64;
            for b in residues(p) {
                for c in residues(p) {
                    for d in residues(p) {
                        let f = s1_sum(p, q, m2, b, c, d)?;
                        let l = s1_literal(p, q, m2, b, c, d)?;
                        worst = worst.max(f.abs());
                        gap = gap.max((f.complex() - l.complex()).norm());
                    }
                }
            }
            let ps = params! {"p" => p, "q" => q, "m2" => m2};
            Ok(vec![
                VerificationRecord::bound("expsums.s1_bound", ps.clone(), worst, limit * (1.0 + FLOAT_REL)),
                VerificationRecord::bound("expsums.s1_literal_vs_factored", ps, gap, FLOAT_REL * (p * p * p) as f64),
            ])
        })
        .collect();
    Ok(out?.into_iter().flatten().collect())
}

/// The explicit `S_2` bound for modulus `r^f`.
pub fn s2_limit(rf: u64, b: i64, c: i64, dm2: i64) -> Result<f64> {
    let (r, f) = prime_power(rf)?;
    let g = gcd_many(rf, &[b, c, dm2]) as f64;
    Ok(if f == 1 {
        2.0 * r as f64 * g
    } else {
        let k = if r == 2 { 4.0 } else { 2.0 };
        k * (rf as f64).powf(1.5) * g.sqrt()
    })
}

/// `|S_2(r^f; b, c, d)|` against its explicit bound, every `(b, c, d)`.
pub fn s2_bounds(moduli: &[u64]) -> Result<Vec<VerificationRecord>> {
    let tuples: Vec<(u64, u64, i64)> = moduli
        .iter()
        .flat_map(|&n| coprime_samples(n).into_iter().map(move |(q, m2)| (n, q, m2)))
        .collect();
    tuples
        .into_par_iter()
        .map(|(n, q, m2)| {
            let (_, f) = prime_power(n)?;
            // the largest value of |S| / limit
            let mut worst = 0.0f64;
            for b in residues(n) {
                for c in residues(n) {
                    for d in residues(n) {
                        let v = s2_sum(n, q, m2, b, c, d)?.abs();
                        worst = worst.max(v / s2_limit(n, b, c, d * m2)?);
                    }
                }
            }
            let id = if f == 1 { "expsums.s2_bound_prime" } else { "expsums.s2_bound_prime_power" };
            Ok(VerificationRecord::bound(id, params! {"modulus" => n, "q" => q, "m2" => m2}, worst, 1.0 + FLOAT_REL))
        })
        .collect()
}

/// `S_2 = 0` when `ord_r(c) < ord_r(d m2)`.
pub fn s2_vanishing(moduli: &[u64]) -> Result<Vec<VerificationRecord>> {
    let mut out = Vec::new();
    for &n in moduli {
        let (r, f) = prime_power(n)?;
        for s in 0..f {
            for t in s + 1..=f {
                for (q, m2) in coprime_samples(n) {
                    let c = r.pow(s) as i64;
                    let d = (r.pow(t) % n) as i64;
                    let mut worst = 0.0f64;
                    for b in residues(n) {
                        worst = worst.max(s2_sum(n, q, m2, b, c, d)?.abs());
                    }
                    out.push(VerificationRecord::bound(
                        "expsums.s2_vanishes_below_order",
                        params! {"modulus" => n, "s" => s, "t" => t, "q" => q, "m2" => m2},
                        worst,
                        FLOAT_REL * (n * n) as f64,
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// `|G(t, p)| = sqrt p` for `p` not dividing `t`, and `G(0, p) = 0`.
pub fn gauss_magnitude(pmax: u64) -> Result<Vec<VerificationRecord>> {
    odd_primes(pmax)
        .into_par_iter()
        .map(|p| {
            let sq = (p as f64).sqrt();
            let mut worst = gauss_sum(0, p)?.abs();
            for t in 1..p as i64 {
                worst = worst.max((gauss_sum(t, p)?.abs() - sq).abs());
            }
            Ok(VerificationRecord::bound("expsums.gauss_magnitude", params! {"p" => p}, worst, FLOAT_REL * p as f64))
        })
        .collect()
}

/// `max |K(a, b; p)| / (2 sqrt p)` over `a, b` nonzero; report only.
pub fn weil_report(pmax: u64) -> Result<Vec<VerificationRecord>> {
    odd_primes(pmax)
        .into_par_iter()
        .map(|p| {
            let mut worst = 0.0f64;
            for a in 1..p as i64 {
                for b in 1..p as i64 {
                    worst = worst.max(kloosterman_k(a, b, p)?.abs());
                }
            }
            Ok(VerificationRecord::report("expsums.weil_ratio", params! {"p" => p}, worst / (2.0 * (p as f64).sqrt()), 1.0))
        })
        .collect()
}

/// Random `(u, p1, p2, q, m2, b, c, d)` with coprime moduli and `u p1 p2 <= nmax`.
pub fn crt_tuples(seed: u64, count: usize, nmax: u64) -> Vec<(u64, u64, u64, u64, i64, i64, i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = odd_primes(200);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p1 = ps[rng.gen_range(0..ps.len())];
        let p2 = ps[rng.gen_range(0..ps.len())];
        if p1 == p2 || p1 * p2 > 400 {
            continue;
        }
        let u = rng.gen_range(1..=50u64);
        let q = rng.gen_range(1..=30u64);
        let m2 = rng.gen_range(1..=15i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let qm = q * m2.unsigned_abs();
        if u * p1 * p2 > nmax || gcd(u, p1 * p2 * qm) != 1 || qm % p1 == 0 || qm % p2 == 0 {
            continue;
        }
        let n = (u * p1 * p2) as i64;
        let d = if out.len() % 10 == 0 { 0 } else { rng.gen_range(0..n) };
        out.push((u, p1, p2, q, m2, rng.gen_range(0..n), rng.gen_range(0..n), d));
    }
    out
}

pub fn crt_sweep(seed: u64, count: usize, nmax: u64) -> Result<Vec<VerificationRecord>> {
    crt_tuples(seed, count, nmax)
        .into_par_iter()
        .map(|(u, p1, p2, q, m2, b, c, d)| crt_factor_check(u, p1, p2, q, m2, b, c, d))
        .collect()
}

/// The full exponential-sum battery.
pub fn expsums_suite(seed: u64) -> Result<Vec<VerificationRecord>> {
    let mut out = zero_identity(31)?;
    out.extend(s1_bounds(&[3, 5, 7, 11, 13])?);
    out.extend(s2_bounds(&[3, 5, 7, 11, 9, 25, 27, 49, 4, 8, 16])?);
    out.extend(s2_vanishing(&[9, 25, 27, 4, 8, 16])?);
    out.extend(gauss_magnitude(101)?);
    out.extend(weil_report(101)?);
    out.extend(crt_sweep(seed, 60, 3000)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        for r in zero_identity(7).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in s2_bounds(&[3, 9, 4]).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in s2_vanishing(&[9, 8]).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in gauss_magnitude(13).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn crt_tuples_are_seeded() {
        let a = crt_tuples(3, 5, 3000);
        assert_eq!(a, crt_tuples(3, 5, 3000));
        for &(u, p1, p2, ..) in &a {
            assert!(u * p1 * p2 <= 3000);
        }
    }

    #[test]
    fn limits() {
        assert_eq!(s2_limit(5, 0, 0, 0).unwrap(), 50.0);
        assert_eq!(s2_limit(5, 1, 0, 0).unwrap(), 10.0);
        assert!((s2_limit(8, 2, 4, 6).unwrap() - 4.0 * 8f64.powf(1.5) * 2f64.sqrt()).abs() < 1e-12);
    }
}
