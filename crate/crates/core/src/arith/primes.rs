//! Prime tables.

use std::sync::{Arc, RwLock};

use super::modular::{mul_mod, pow_mod};

/// Primes `<= n` by the sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let half = (n - 1) / 2; // index i <-> 2i+3, i < half
    let mut composite = vec![false; half];
    let mut i = 0;
    while (2 * i + 3) * (2 * i + 3) <= n {
        if !composite[i] {
            let p = 2 * i + 3;
            let mut j = (p * p - 3) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(n / 10 + 8);
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (2 * i + 3) as u64),
    );
    out
}

/// Process-wide prime table that grows on demand. Readers get an immutable
/// snapshot.
pub fn shared_primes(limit: u64) -> Arc<Vec<u64>> {
    static TABLE: RwLock<Option<(u64, Arc<Vec<u64>>)>> = RwLock::new(None);
    if let Some((lim, v)) = TABLE.read().unwrap().as_ref() {
        if *lim >= limit {
            return Arc::clone(v);
        }
    }
    let mut guard = TABLE.write().unwrap();
    if let Some((lim, v)) = guard.as_ref() {
        if *lim >= limit {
            return Arc::clone(v);
        }
    }
    let lim = limit.max(1 << 16).next_power_of_two();
    let v = Arc::new(primes_up_to(lim));
    *guard = Some((lim, Arc::clone(&v)));
    v
}

/// Calls `f` on every prime in `[a, b)`, sieving segment by segment so that
/// memory stays `O(sqrt(b) + segment)`.
pub fn for_each_prime_in<F: FnMut(u64)>(a: u64, b: u64, mut f: F) {
    const SEG: u64 = 1 << 18;
    if b <= 2 || a >= b {
        return;
    }
    let base = shared_primes(super::factor::isqrt(b - 1) + 1);
    let mut lo = a.max(2);
    let mut flags = vec![true; SEG as usize];
    while lo < b {
        let hi = (lo + SEG).min(b);
        let len = (hi - lo) as usize;
        flags[..len].fill(true);
        for &p in base.iter() {
            if p * p >= hi {
                break;
            }
            let mut k = (p * p).max(lo.div_ceil(p) * p);
            while k < hi {
                flags[(k - lo) as usize] = false;
                k += p;
            }
        }
        for (i, &is_p) in flags[..len].iter().enumerate() {
            if is_p {
                f(lo + i as u64);
            }
        }
        lo = hi;
    }
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
