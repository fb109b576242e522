//! Exact identities between the multiplicative functions and their Euler
//! products.

use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use super::euler::{euler_constant_dd, rational_to_f64, EulerKind};
use super::functions::{f_q_zero_counting_factor, f_q_zero_local_factors, kappa_of};
use crate::arith::factor::{factorize, Factorization};
use crate::arith::modular::gcd;
use crate::arith::primes::primes_up_to;
use crate::numeric::sum::CompensatedSum;
use crate::params;
use crate::report::VerificationRecord;

type R128 = Ratio<i128>;

/// Pairs `(rho, sigma)` with `rho * sigma | m^2`, `sigma` squarefree, as
/// `(kappa(rho), mu(sigma), rho, sigma)`.
fn kappa_mu_pairs(m: u64) -> Vec<(BigRational, i32, u64, u64)> {
    let m2 = factorize(m * m).expect("m >= 1");
    let mut out = Vec::new();
    for n in m2.divisors() {
        let fnn = factorize(n).unwrap();
        for rho in fnn.divisors() {
            let sigma = n / rho;
            let fs = factorize(sigma).unwrap();
            if !fs.is_squarefree() {
                continue;
            }
            let mu = if fs.factors.len().is_multiple_of(2) { 1 } else { -1 };
            out.push((kappa_of(&factorize(rho).unwrap()), mu, rho, sigma));
        }
    }
    out
}

/// The three kappa-mu divisor sums for squarefree m, each paired with its
/// product form: `(sum/(rho sigma), sum, sum sqrt(rho sigma))`.
pub struct KappaMuSums {
    pub inv: (BigRational, BigRational),
    pub plain: (BigRational, BigRational),
    pub sqrt: (f64, f64),
}

pub fn kappa_mu_sums(m: u64) -> KappaMuSums {
    let pairs = kappa_mu_pairs(m);
    let mut inv = BigRational::zero();
    let mut plain = BigRational::zero();
    let mut sq = CompensatedSum::new();
    for (k, mu, rho, sigma) in &pairs {
        let km = k * BigRational::from_integer((*mu).into());
        inv += &km / BigRational::from_integer((rho * sigma).into());
        plain += &km;
        sq.add(rational_to_f64(&km) * ((rho * sigma) as f64).sqrt());
    }
    let f = factorize(m).unwrap();
    let mut inv_prod = BigRational::one();
    let mut plain_prod = BigRational::one();
    let mut sqrt_prod = 1.0;
    for p in f.primes() {
        let p2 = (p * p) as i64;
        inv_prod *= BigRational::new((p2 - 1).into(), p2.into());
        plain_prod *= BigRational::new((p2 - p as i64).into(), (p2 - 1).into());
        let pf = p as f64;
        sqrt_prod *= (pf * pf - pf * pf.sqrt() + pf - 1.0) / (pf * pf - 1.0);
    }
    KappaMuSums { inv: (inv, inv_prod), plain: (plain, plain_prod), sqrt: (sq.value(), sqrt_prod) }
}

/// `h(d)` for `0 <= d <= n` as f64 (`h(0) = 0`).
pub fn h_table(n: usize) -> Vec<f64> {
    let mut h = vec![1.0; n + 1];
    h[0] = 0.0;
    for &p in primes_up_to(n as u64).iter() {
        let p = p as usize;
        let f = (p * p) as f64 / (p * p - 2) as f64;
        for k in (p..=n).step_by(p) {
            h[k] *= f;
        }
        if p * p <= n {
            for k in (p * p..=n).step_by(p * p) {
                h[k] = 0.0;
            }
        }
    }
    h
}

/// Partial sums of `h(d)/d^k` over `d <= D`, `(d, r) = 1`, against the Euler
/// product, with the tail bound `sum_{d > D} h(d)/d^k <= (1/C2) D^{1-k}/(k-1)`.
fn h_series_record(r: u64, k: u32, hs: &[f64]) -> VerificationRecord {
    let dmax = hs.len() - 1;
    let mut s = CompensatedSum::new();
    for (d, &h) in hs.iter().enumerate().skip(1) {
        if h != 0.0 && gcd(d as u64, r) == 1 {
            s.add(h / (d as f64).powi(k as i32));
        }
    }
    let kind = if k == 2 { EulerKind::SumHD2(r) } else { EulerKind::SumHD4(r) };
    let (prod, perr) = euler_constant_dd(kind).expect("r >= 1");
    let inv_c2 = 3.1;
    let tail = inv_c2 * (dmax as f64).powi(1 - k as i32) / (k as f64 - 1.0);
    let rounding = s.error_bound() + 8.0 * f64::EPSILON * s.abs_sum();
    VerificationRecord::check(
        format!("h_series.d{k}"),
        params! {"r" => r, "D" => dmax},
        s.value(),
        prod.to_f64(),
        tail + perr + rounding + prod.to_f64() * f64::EPSILON,
    )
}

/// Factorization table by smallest prime factor for `0..=n`.
fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for k in (i..=n).step_by(i) {
                if spf[k] == 0 {
                    spf[k] = i as u32;
                }
            }
        }
    }
    spf
}

fn factor_with(spf: &[u32], mut n: usize) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

/// Checks `sum_{d^2 | l, (d, r) = 1} h(d)/d^2 = prod_{p^2 | l, p not dividing r}
/// (p^2-1)/(p^2-2)` exactly for `1 <= |l| <= l_max`. Returns the number of
/// agreeing values of l and the number checked.
pub fn gq_identity_counts(r: i64, l_max: usize, spf: &[u32]) -> (u64, u64) {
    let ra = r.unsigned_abs();
    let mut agree = 0u64;
    let mut total = 0u64;
    for l in 1..=l_max {
        let fac = factor_with(spf, l);
        // primes with p^2 | l
        let sq: Vec<u64> = fac.iter().filter(|&&(_, e)| e >= 2).map(|&(p, _)| p).collect();
        // lhs: squarefree d built from those primes (h vanishes elsewhere),
        // h(d)/d^2 = prod 1/(p^2-2)
        let mut lhs = R128::zero();
        for mask in 0u32..(1 << sq.len()) {
            let mut term = R128::one();
            let mut ok = true;
            for (i, &p) in sq.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if ra.is_multiple_of(p) {
                        ok = false;
                        break;
                    }
                    term /= R128::from_integer((p * p) as i128 - 2);
                }
            }
            if ok {
                lhs += term;
            }
        }
        let mut rhs = R128::one();
        for &p in &sq {
            if !ra.is_multiple_of(p) {
                let p2 = (p * p) as i128;
                rhs *= R128::new(p2 - 1, p2 - 2);
            }
        }
        // l and -l have the same square divisors; both signs share one test
        total += 2;
        if lhs == rhs {
            agree += 2;
        }
    }
    (agree, total)
}

/// Per-prime comparison of f_q(0, m): literal product definition, closed form,
/// and (for p not dividing q) the counting factor `1 - u_p(0)/p^2` scaled by
/// the `phi(q)/q` contribution. Returns one record summarizing all primes up
/// to `p_max`.
pub fn f_q_zero_local_record(m: i64, q: u64, p_max: u64) -> VerificationRecord {
    let mut agree = 0u64;
    let mut total = 0u64;
    for &p in primes_up_to(p_max).iter() {
        let (lit, closed) = f_q_zero_local_factors(p, m, q);
        let counting = if q.is_multiple_of(p) {
            BigRational::new((p as i64 - 1).into(), (p as i64).into())
        } else {
            f_q_zero_counting_factor(p, m)
        };
        total += 1;
        if lit == closed && closed == counting {
            agree += 1;
        }
    }
    VerificationRecord::exact(
        "f_q_zero.local_factors",
        params! {"m" => m, "q" => q, "p_max" => p_max},
        agree as f64,
        total as f64,
        agree == total,
    )
}

/// The full identity battery. Failures are recorded, never raised.
pub fn identity_suite(m_max: u64, r_max: u64) -> Vec<VerificationRecord> {
    let mut out = Vec::new();
    for m in 1..=m_max.max(1) {
        let f: Factorization = factorize(m).unwrap();
        if !f.is_squarefree() {
            continue;
        }
        let s = kappa_mu_sums(m);
        out.push(VerificationRecord::exact(
            "kappa_mu.inverse_sum",
            params! {"m" => m},
            rational_to_f64(&s.inv.0),
            rational_to_f64(&s.inv.1),
            s.inv.0 == s.inv.1,
        ));
        out.push(VerificationRecord::exact(
            "kappa_mu.plain_sum",
            params! {"m" => m},
            rational_to_f64(&s.plain.0),
            rational_to_f64(&s.plain.1),
            s.plain.0 == s.plain.1,
        ));
        out.push(VerificationRecord::check(
            "kappa_mu.sqrt_sum",
            params! {"m" => m},
            s.sqrt.0,
            s.sqrt.1,
            1e-12,
        ));
    }
    let h2 = h_table(200_000);
    let h4 = &h2[..=2000];
    for r in 1..=r_max.max(1) {
        out.push(h_series_record(r, 2, &h2));
        out.push(h_series_record(r, 4, h4));
    }
    let l_max = 10_000;
    let spf = spf_table(l_max);
    let mut rs: Vec<i64> = (1..=r_max.max(1) as i64).collect();
    rs.extend([-1, -6, -30]);
    for r in rs {
        let (agree, total) = gq_identity_counts(r, l_max, &spf);
        out.push(VerificationRecord::exact(
            "square_divisor_h_sum",
            params! {"r" => r, "l_max" => l_max},
            agree as f64,
            total as f64,
            agree == total,
        ));
    }
    out
}

/// `f(x) = lhs - rhs` as a ratio for exact identity checks in tests.
pub fn ratio_to_f64(r: &R128) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}
