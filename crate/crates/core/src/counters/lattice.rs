//! Quadruple lattice counts and the divisor triple sum.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modular::{gcd, mod_inverse, reduce};
use crate::error::{invalid, Error, Result};
use crate::params;
use crate::report::VerificationRecord;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatticeCount {
    pub count: u64,
    /// `(X/q) (X/(JK) + X K / J^2)`, for report-only ratios.
    pub reference: f64,
}

fn check_lattice(j: u64, k: u64, m1: i64, m2: i64, q: u64) -> Result<()> {
    if j == 0 || k == 0 || q == 0 {
        return Err(invalid("J, K and q must be positive"));
    }
    for m in [m1, m2] {
        let g = gcd(m.unsigned_abs(), q);
        if m == 0 || g != 1 {
            return Err(Error::NotCoprime { a: m, b: q, g });
        }
    }
    Ok(())
}

/// `#{(j,k,u,v): J<j<=2J, K<k<=2K, (jk,q)=1, 0<j^2 u<X, 0<k^2 v<X,
/// m1 j^2 u = m2 k^2 v (mod q)}`.
pub fn lattice_count_n(jj: u64, kk: u64, m1: i64, m2: i64, x: u64, q: u64) -> Result<LatticeCount> {
    check_lattice(jj, kk, m1, m2, q)?;
    let a1 = reduce(m1, q) as u128;
    let a2 = reduce(m2, q) as u128;
    let q128 = q as u128;
    let count = (jj + 1..=2 * jj)
        .into_par_iter()
        .map(|j| {
            if gcd(j, q) != 1 {
                return 0;
            }
            let uu = x.saturating_sub(1) / (j * j);
            let aj = a1 * ((j * j) as u128 % q128) % q128;
            let mut total = 0u64;
            for k in kk + 1..=2 * kk {
                if gcd(k, q) != 1 {
                    continue;
                }
                let vv = x.saturating_sub(1) / (k * k);
                if q == 1 {
                    total += uu * vv;
                    continue;
                }
                let bk = a2 * ((k * k) as u128 % q128) % q128;
                let binv = mod_inverse(bk as i64, q).expect("coprime") as u128;
                // v = c u (mod q)
                let c = (binv * aj % q128) as u64;
                total += pairs_on_line(c, uu, vv, q);
            }
            total
        })
        .sum();
    let (xf, jf, kf) = (x as f64, jj as f64, kk as f64);
    let reference = xf / q as f64 * (xf / (jf * kf) + xf * kf / (jf * jf));
    Ok(LatticeCount { count, reference })
}

/// `#{(u, v): 1<=u<=U, 1<=v<=V, v = c u (mod q)}` with c a unit.
fn pairs_on_line(c: u64, uu: u64, vv: u64, q: u64) -> u64 {
    let count_v = |r: u64| -> u64 {
        if r == 0 {
            vv / q
        } else if r <= vv {
            (vv - r) / q + 1
        } else {
            0
        }
    };
    // a full period of u meets every residue of v once
    let full = uu / q;
    let mut total = full * vv;
    for u in full * q + 1..=uu {
        total += count_v((c as u128 * u as u128 % q as u128) as u64);
    }
    total
}

/// Four nested loops over the defining set.
pub fn lattice_count_brute(jj: u64, kk: u64, m1: i64, m2: i64, x: u64, q: u64) -> u64 {
    let mut n = 0;
    for j in jj + 1..=2 * jj {
        for k in kk + 1..=2 * kk {
            if gcd(j * k, q) != 1 {
                continue;
            }
            let mut u = 1;
            while j * j * u < x {
                let mut v = 1;
                while k * k * v < x {
                    let lhs = m1 as i128 * (j * j * u) as i128 - m2 as i128 * (k * k * v) as i128;
                    if lhs.rem_euclid(q as i128) == 0 {
                        n += 1;
                    }
                    v += 1;
                }
                u += 1;
            }
        }
    }
    n
}

/// Divisor counts `d(n)` for `0 <= n <= N`.
pub fn divisor_count_table(n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n + 1];
    for a in 1..=n {
        for k in (a..=n).step_by(a) {
            d[k] += 1;
        }
    }
    d
}

/// `sum_{K<k<=2K} sum_{1<=l<=X/q} sum_{1<=v<=S} d(k^2 v - lq)` over positive
/// arguments.
pub fn divisor_triple_sum(kk: u64, s: u64, x: u64, q: u64) -> Result<u64> {
    if kk == 0 || s == 0 || x == 0 || q == 0 {
        return Err(invalid("K, S, X, q must be positive"));
    }
    if (s as u128) * (kk as u128) * (kk as u128) > x as u128 {
        return Err(invalid(format!("S = {s} exceeds X/K^2 = {}", x as f64 / (kk * kk) as f64)));
    }
    let lmax = x / q;
    if lmax == 0 {
        return Ok(0);
    }
    let top = (4 * kk * kk * s) as usize;
    let d = divisor_count_table(top);
    Ok((kk + 1..=2 * kk)
        .into_par_iter()
        .map(|k| {
            let mut t = 0u64;
            for v in 1..=s {
                let a = k * k * v;
                // l < a / q keeps the argument positive
                let lim = ((a - 1) / q).min(lmax);
                for l in 1..=lim {
                    t += d[(a - l * q) as usize] as u64;
                }
            }
            t
        })
        .sum())
}

/// Report-only comparison with `(X/q)(X^{1/2+eta} + X K^{-1} log^3 X)`.
pub fn divisor_triple_report(kk: u64, s: u64, x: u64, q: u64, eta: f64) -> Result<VerificationRecord> {
    let v = divisor_triple_sum(kk, s, x, q)? as f64;
    let xf = x as f64;
    let ell = xf.ln().max(1.0);
    let reference = xf / q as f64 * (xf.powf(0.5 + eta) + xf / kk as f64 * ell.powi(3));
    Ok(VerificationRecord::report(
        "divisor_triple_sum.envelope",
        params! {"K" => kk, "S" => s, "X" => x, "q" => q, "eta" => eta},
        v,
        reference,
    ))
}

pub fn lattice_report(jj: u64, kk: u64, m1: i64, m2: i64, x: u64, q: u64) -> Result<VerificationRecord> {
    let c = lattice_count_n(jj, kk, m1, m2, x, q)?;
    Ok(VerificationRecord::report(
        "lattice_count.envelope",
        params! {"J" => jj, "K" => kk, "m1" => m1, "m2" => m2, "X" => x, "q" => q},
        c.count as f64,
        c.reference,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_count_n(1, 1, 1, 1, 10, 3).unwrap().count, 2);
        assert_eq!(lattice_count_brute(1, 1, 1, 1, 10, 3), 2);
        for (j, k, m) in [(1u64, 2u64, 2i64), (2, 3, -1), (3, 1, 4)] {
            let a = lattice_count_n(j, k, m, 1, 400, 7).unwrap().count;
            let b = lattice_count_n(k, j, 1, m, 400, 7).unwrap().count;
            assert_eq!(a, b);
        }
        // vacuous congruence
        let x = 300u64;
        let su: u64 = (3..=4).map(|j| (x - 1) / (j * j)).sum();
        let sv: u64 = (2..=2).map(|k| (x - 1) / (k * k)).sum();
        assert_eq!(lattice_count_n(2, 1, 1, 1, x, 1).unwrap().count, su * sv);
        assert!(lattice_count_n(1, 1, 3, 1, 10, 3).is_err());
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_triple_sum(1, 2, 10, 5).unwrap(), 2);
        assert_eq!(divisor_triple_sum(1, 2, 10, 11).unwrap(), 0);
        assert!(divisor_triple_sum(2, 3, 10, 5).is_err());
        let mut prev = 0;
        for s in 1..=20 {
            let v = divisor_triple_sum(3, s, 200, 7).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn divisor_sum_brute() {
        let (kk, s, x, q) = (2u64, 5u64, 100u64, 3u64);
        let mut t = 0u64;
        for k in kk + 1..=2 * kk {
            for l in 1..=x / q {
                for v in 1..=s {
                    let a = (k * k * v) as i64 - (l * q) as i64;
                    if a >= 1 {
                        t += crate::arith::factor::divisor_count(a as u64);
                    }
                }
            }
        }
        assert_eq!(divisor_triple_sum(kk, s, x, q).unwrap(), t);
    }
}
