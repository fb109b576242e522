use crate::error::{invalid, Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: u64) -> u64 {
    gcd(a.unsigned_abs(), b)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Canonical representative of `a` modulo `q` in `[0, q)`.
#[inline]
pub fn reduce(a: i64, q: u64) -> u64 {
    (a as i128).rem_euclid(q as i128) as u64
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi_symbol(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(invalid(format!("Jacobi symbol needs an odd positive modulus, got {n}")));
    }
    let mut a = reduce(a, n);
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

/// Inverse of `x` modulo `q`, in `[1, q-1]` (or 0 when `q = 1`).
pub fn mod_inverse(x: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(invalid("modulus must be positive"));
    }
    if q == 1 {
        return Ok(0);
    }
    let a = reduce(x, q) as i128;
    let (mut old_r, mut r) = (a, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { x, q });
    }
    Ok(old_s.rem_euclid(q as i128) as u64)
}
