use serde::Serialize;

use super::modular::{gcd, mul_mod};
use super::primes::{is_prime, shared_primes};
use crate::error::{invalid, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
pub const MAX_INPUT: u64 = 1 << 63;

/// Canonical prime-power decomposition of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` with strictly increasing primes and exponents >= 1.
    pub factors: Vec<(u64, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativeProfile {
    pub mu: i8,
    pub phi: u64,
    pub d: u64,
    pub omega: u32,
    /// Product of the primes whose square divides n.
    pub sigma_core: u64,
    /// Product of the primes dividing n exactly once.
    pub squarefree_kernel: u64,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn profile(&self) -> MultiplicativeProfile {
        multiplicative_profile(self)
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out
    }

    /// Exponent of `p` in `n` (0 if absent).
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

pub fn multiplicative_profile(f: &Factorization) -> MultiplicativeProfile {
    let mut mu = 1i8;
    let mut phi = 1u64;
    let mut d = 1u64;
    let mut sigma_core = 1u64;
    let mut kernel = 1u64;
    for &(p, e) in &f.factors {
        phi *= (p - 1) * p.pow(e - 1);
        d *= e as u64 + 1;
        if e == 1 {
            mu = -mu;
            kernel *= p;
        } else {
            mu = 0;
            sigma_core *= p;
        }
    }
    MultiplicativeProfile {
        mu,
        phi,
        d,
        omega: f.factors.len() as u32,
        sigma_core,
        squarefree_kernel: kernel,
    }
}

/// Factor `n` (1 <= n <= 2^63): trial division up to 10^6, then
/// Miller–Rabin and Brent's variant of Pollard rho for what remains.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("cannot factor 0"));
    }
    if n > MAX_INPUT {
        return Err(invalid(format!("{n} exceeds 2^63")));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let tz = m.trailing_zeros();
    if tz > 0 {
        factors.push((2, tz));
        m >>= tz;
    }
    let limit = TRIAL_LIMIT.min(isqrt(m) + 1);
    let primes = shared_primes(limit);
    for &p in primes.iter().skip(1) {
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        let mut big = Vec::new();
        split(m, &mut big);
        big.sort_unstable();
        let mut i = 0;
        while i < big.len() {
            let p = big[i];
            let mut e = 0;
            while i < big.len() && big[i] == p {
                e += 1;
                i += 1;
            }
            factors.push((p, e));
        }
    }
    Ok(Factorization { n, factors })
}

/// Factorization of |n| for nonzero signed input.
pub fn factorize_abs(n: i64) -> Result<Factorization> {
    factorize(n.unsigned_abs())
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = isqrt(n);
    if r * r == n {
        split(r, out);
        split(r, out);
        return;
    }
    let d = pollard_brent(n);
    split(d, out);
    split(n / d, out);
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Möbius function of a single integer.
pub fn mobius(n: u64) -> i8 {
    factorize(n).map(|f| f.profile().mu).unwrap_or(0)
}

/// Primes dividing `n`, or an empty list for `n = 0`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    factorize(n).map(|f| f.primes().collect()).unwrap_or_default()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).map(|f| f.profile().phi).unwrap_or(0)
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).map(|f| f.profile().d).unwrap_or(0)
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}
