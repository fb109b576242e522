//! The sawtooth function and its integrals.

use crate::error::{invalid, Result};
use crate::numeric::sum::CompensatedSum;
use crate::numeric::zeta::zeta_negative;
use crate::numeric::ApproxReal;

/// `psi(v) = floor(v) - v + 1/2`.
#[inline]
pub fn psi(v: f64) -> f64 {
    v.floor() - v + 0.5
}

/// `int_0^x psi = ({x} - {x}^2)/2` for `x >= 0`.
#[inline]
pub fn psi_antiderivative(x: f64) -> f64 {
    let f = x - x.floor();
    0.5 * f * (1.0 - f)
}

/// The same for a fractional part given directly.
#[inline]
pub(crate) fn psi1_of_fract(f: f64) -> f64 {
    0.5 * f * (1.0 - f)
}

/// `zeta(s/2 - 1)/(s/2 - 1)`, the limit of the Mellin integral.
pub fn psi_mellin_limit(s: f64) -> Result<ApproxReal> {
    check_s(s)?;
    let t = s / 2.0 - 1.0;
    let z = zeta_negative(t);
    Ok(ApproxReal::new(z.value / t, z.abs_err / t.abs() + (z.value / t).abs() * f64::EPSILON))
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 2.0) {
        return Err(invalid(format!("s = {s} must lie in (0, 2)")));
    }
    Ok(())
}

/// `int_n^x (n + 1/2 - v) v^{-a} dv` in closed form, for small n.
fn piece_closed(n: f64, x: f64, a: f64) -> (f64, f64) {
    let anti = |v: f64| (n + 0.5) * v.powf(1.0 - a) / (1.0 - a) - v.powf(2.0 - a) / (2.0 - a);
    let lo = if n == 0.0 { 0.0 } else { anti(n) };
    let hi = anti(x);
    let mag = (n + 0.5) * x.powf(1.0 - a) / (1.0 - a) + x.powf(2.0 - a) / (2.0 - a);
    (hi - lo, 8.0 * f64::EPSILON * mag)
}

/// `a int_0^f Psi_1(t) (n+t)^{-a-1} dt` by the binomial series in `t/n`,
/// `n >= 2`, `0 < f <= 1`.
fn piece_series(n: f64, f: f64, a: f64) -> f64 {
    let mut coeff = 1.0;
    let mut fk2 = f * f; // f^{k+2}
    let mut sum = 0.0;
    let inv_n = 1.0 / n;
    let mut scale = 1.0; // n^{-k}
    for k in 0..200 {
        let kf = k as f64;
        let moment = 0.5 * (fk2 / (kf + 2.0) - fk2 * f / (kf + 3.0));
        let term = coeff * scale * moment;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() && k > 1 {
            break;
        }
        coeff *= (-a - 1.0 - kf) / (kf + 1.0);
        scale *= inv_n;
        fk2 *= f;
    }
    a * n.powf(-a - 1.0) * sum
}

/// `int_0^X psi(v) v^{-s/2} dv` by exact integration over unit intervals.
pub fn psi_mellin_integral(x: f64, s: f64) -> Result<ApproxReal> {
    check_s(s)?;
    if !(x > 1.0) || !x.is_finite() {
        return Err(invalid(format!("X = {x} must exceed 1")));
    }
    let a = s / 2.0;
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    // [0, 1] and [1, min(2, X)] in closed form
    let (v, e) = piece_closed(0.0, 1.0, a);
    acc.add(v);
    err += e;
    let (v, e) = piece_closed(1.0, x.min(2.0), a);
    acc.add(v);
    err += e;
    let nmax = x.floor();
    let mut n = 2.0;
    while n < nmax {
        // the boundary term of the integration by parts vanishes on full periods
        acc.add(piece_series(n, 1.0, a));
        n += 1.0;
    }
    if nmax >= 2.0 && x > nmax {
        let f = x - nmax;
        acc.add(psi1_of_fract(f) * x.powf(-a) + piece_series(nmax, f, a));
    }
    err += acc.error_bound() + 64.0 * f64::EPSILON * acc.abs_sum();
    Ok(ApproxReal::new(acc.value(), err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.25), 0.25);
        assert_eq!(psi(1.0), 0.5);
        assert_eq!(psi(-0.25), -0.25);
        for k in 0..100 {
            let v = k as f64 * 0.173 - 5.0;
            assert!((psi(v + 1.0) - psi(v)).abs() < 1e-12);
            assert!(psi(v).abs() <= 0.5);
        }
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(psi_antiderivative(0.5), 0.125);
        assert_eq!(psi_antiderivative(3.0), 0.0);
        for k in 0..10_000 {
            let x = k as f64 * 0.0137;
            let v = psi_antiderivative(x);
            assert!((0.0..=0.125).contains(&v));
        }
    }

    #[test]
    fn antiderivative_differentiates_to_psi() {
        let h = 1e-6;
        for k in 0..1000 {
            let x = k as f64 * 0.01237 + 0.003;
            let dist = (x - x.round()).abs();
            if dist > 2.0 * h {
                let d = (psi_antiderivative(x + h) - psi_antiderivative(x)) / h;
                assert!((d - psi(x)).abs() <= h, "x={x}");
            }
        }
    }

    #[test]
    fn mellin_against_quadrature() {
        // composite Simpson on each unit interval of [2, 7.5], where the
        // integrand is smooth
        let s = 1.0;
        let f = |v: f64| psi(v) * v.powf(-s / 2.0);
        let mut q = 0.0;
        let mut lo = 2.0;
        while lo < 7.5 {
            let hi = (lo + 1.0f64).min(7.5);
            let n = 2000;
            let h = (hi - lo) / n as f64;
            // stay inside the open interval so psi keeps its branch
            let g = |v: f64| if v >= hi { (lo + 0.5 - hi) * hi.powf(-s / 2.0) } else { f(v) };
            let mut acc = g(lo) + g(hi);
            for i in 1..n {
                acc += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            q += acc * h / 3.0;
            lo = hi;
        }
        let v = psi_mellin_integral(7.5, s).unwrap().value - psi_mellin_integral(2.0, s).unwrap().value;
        assert!((v - q).abs() < 1e-12, "{v} vs {q}");
    }

    #[test]
    fn mellin_limit_at_one() {
        let l = psi_mellin_limit(1.0).unwrap();
        assert!((l.value - 0.415_772_6).abs() < 1e-6);
        let v = psi_mellin_integral(1e4, 1.0).unwrap();
        assert!((v.value - l.value).abs() <= 1e-2);
        assert!(psi_mellin_integral(10.0, 2.0).is_err());
    }
}
