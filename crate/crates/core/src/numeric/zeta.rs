//! Riemann zeta values via Euler–Maclaurin summation, in double-double.
//!
//! For real `s > 1`,
//! `zeta(s) = sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2
//!            + sum_{k=1}^{M} B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1} + R_M`,
//! and for real `s` the remainder is bounded by the first omitted term.
//! Negative arguments go through the functional equation.

use std::sync::OnceLock;

use super::approx::ApproxReal;
use super::dd::{DoubleDouble as DD, DD_EPS};

const EM_N: u32 = 40;
const EM_TERMS: usize = 12;

/// B_2, B_4, ..., B_26 as exact fractions.
const BERNOULLI: [(i128, i128); 13] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
];

/// `B_{2k}/(2k)!` for k = 1..=13.
fn bernoulli_over_factorial() -> &'static [DD; 13] {
    static TABLE: OnceLock<[DD; 13]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [DD::ZERO; 13];
        let mut fact = DD::ONE;
        for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
            let two_k = 2 * (k as i128 + 1);
            fact = fact * DD::from_i128(two_k - 1) * DD::from_i128(two_k);
            out[k] = DD::from_ratio(num, den) / fact;
        }
        out
    })
}

fn int_pow_neg(n: u32, s: DD, s_int: Option<i32>) -> DD {
    let base = DD::from_f64(n as f64);
    match s_int {
        Some(k) => base.powi(-k),
        None => (-(base.ln() * s)).exp(),
    }
}

fn as_int(s: DD) -> Option<i32> {
    if s.lo == 0.0 && s.hi.fract() == 0.0 && s.hi.abs() < 1e6 {
        Some(s.hi as i32)
    } else {
        None
    }
}

/// `zeta(s) - 1` for real `s > 1`, with an absolute error bound.
///
/// Computing the offset directly keeps full relative precision for large `s`,
/// where `zeta(s)` itself rounds to one.
pub fn zeta_minus_one_dd(s: DD) -> (DD, f64) {
    assert!(s.hi > 1.0, "zeta_minus_one_dd requires s > 1");
    let s_int = as_int(s);
    let mut head = DD::ZERO;
    for n in (2..EM_N).rev() {
        head += int_pow_neg(n, s, s_int);
    }
    let n = DD::from_f64(EM_N as f64);
    let n_pow = int_pow_neg(EM_N, s, s_int); // N^-s
    let mut tail = n_pow * n / (s - 1.0) + n_pow * 0.5;
    let bf = bernoulli_over_factorial();
    // rising factorial (s)_{2k-1} and N^{-s-2k+1}
    let mut rising = s;
    let mut npow = n_pow / n;
    let n2 = n * n;
    let mut last = DD::ZERO;
    for k in 0..=EM_TERMS {
        let term = bf[k] * rising * npow;
        if k == EM_TERMS {
            last = term;
            break;
        }
        tail += term;
        let j = (2 * k + 1) as f64;
        rising = rising * (s + j) * (s + j + 1.0);
        npow = npow / n2;
    }
    let value = head + tail;
    let err = last.abs().to_f64() + value.abs().to_f64() * DD_EPS * 64.0;
    (value, err)
}

pub fn zeta_dd(s: DD) -> (DD, f64) {
    let (v, e) = zeta_minus_one_dd(s);
    (v + 1.0, e + DD_EPS)
}

/// `zeta(s)` for real `s > 1`.
pub fn zeta(s: f64) -> ApproxReal {
    let (v, e) = zeta_dd(DD::from_f64(s));
    ApproxReal::from_dd(v, e)
}

pub fn zeta_three_halves_dd() -> (DD, f64) {
    static V: OnceLock<(DD, f64)> = OnceLock::new();
    *V.get_or_init(|| zeta_dd(DD::from_ratio(3, 2)))
}

/// `zeta(-1/2) = -zeta(3/2) / (4 pi)`.
pub fn zeta_minus_half() -> ApproxReal {
    let (z, e) = zeta_three_halves_dd();
    let four_pi = DD::PI * 4.0;
    ApproxReal::from_dd(-(z / four_pi), e / four_pi.to_f64())
}

/// ln Gamma(x) for x > 0 by shifting to x >= 20 and using Stirling's series.
/// Absolute error around 1e-14.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut prod = 1.0;
    let mut x = x;
    while x < 20.0 {
        prod *= x;
        x += 1.0;
    }
    let shift = prod.ln();
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// zeta(s) for real s < 0 (and s not a negative even integer) through the
/// functional equation `zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)`.
/// Accurate to about 1e-13 relative.
pub fn zeta_negative(s: f64) -> ApproxReal {
    assert!(s < 0.0);
    let z1 = zeta(1.0 - s);
    let pi = std::f64::consts::PI;
    let factor = 2f64.powf(s) * pi.powf(s - 1.0) * (pi * s / 2.0).sin() * gamma(1.0 - s);
    let value = factor * z1.value;
    ApproxReal::new(value, (factor * z1.abs_err).abs() + value.abs() * 1e-13)
}
