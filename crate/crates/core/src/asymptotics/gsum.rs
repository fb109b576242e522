//! Weighted sums of sawtooth integrals over `d`.

use crate::arith::factor::{factorize, isqrt};
use crate::arith::modular::gcd;
use crate::arith::primes::primes_up_to;
use crate::error::{invalid, Error, Result};
use crate::multiplicative::euler::{euler_constant, euler_constant_dd, EulerKind};
use crate::numeric::dd::{DoubleDouble as DD, DD_EPS};
use crate::numeric::zeta::{zeta_dd, zeta_three_halves_dd};
use crate::numeric::ApproxReal;

use super::sawtooth::psi1_of_fract;

/// Which weight multiplies `Psi_1(Y/d^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Weight {
    H,
    One,
}

/// `w(d)` for `d <= n` with `w(d) = 0` when `(d, r) > 1`.
fn weight_table(w: Weight, n: usize, r: u64) -> Vec<DD> {
    let mut t: Vec<DD> = (0..=n).map(|d| if d > 0 && gcd(d as u64, r) == 1 { DD::ONE } else { DD::ZERO }).collect();
    if w == Weight::H {
        for &p in primes_up_to(n as u64).iter() {
            let p = p as usize;
            let f = DD::from_f64((p * p) as f64) / DD::from_f64((p * p - 2) as f64);
            for k in (p..=n).step_by(p) {
                t[k] *= f;
            }
            if p * p <= n {
                for k in (p * p..=n).step_by(p * p) {
                    t[k] = DD::ZERO;
                }
            }
        }
    }
    t
}

/// `sum_{(d,r)=1} w(d)/d^2` and `.../d^4` with error bounds.
fn full_sums(w: Weight, r: u64) -> Result<[(DD, f64); 2]> {
    Ok(match w {
        Weight::H => [euler_constant_dd(EulerKind::SumHD2(r))?, euler_constant_dd(EulerKind::SumHD4(r))?],
        Weight::One => {
            let (mut z2, e2) = zeta_dd(DD::from_f64(2.0));
            let (mut z4, e4) = zeta_dd(DD::from_f64(4.0));
            for p in factorize(r)?.primes() {
                let p2 = (p * p) as f64;
                z2 *= DD::ONE - DD::from_f64(p2).recip();
                z4 *= DD::ONE - DD::from_f64(p2 * p2).recip();
            }
            [(z2, e2 + z2.to_f64() * 16.0 * DD_EPS), (z4, e4 + z4.to_f64() * 16.0 * DD_EPS)]
        }
    })
}

/// Default split point `ceil(Y^{2/3})`, never below `floor(sqrt Y)`.
pub fn default_split(y: f64) -> u64 {
    let d = y.powf(2.0 / 3.0).ceil() as u64;
    d.max(isqrt(y as u64)).max(1)
}

fn sawtooth_sum(w: Weight, y: f64, r: u64, split: u64) -> Result<ApproxReal> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(invalid(format!("Y = {y} must be positive")));
    }
    if r == 0 {
        return Err(invalid("r must be positive"));
    }
    let sq = y.sqrt().floor() as u64;
    if split < sq {
        return Err(invalid(format!("split {split} is below sqrt(Y)")));
    }
    let n = split as usize;
    let wt = weight_table(w, n, r);
    let y_int = (y.fract() == 0.0 && y < 9.0e15).then_some(y as u64);
    let mut head = DD::ZERO;
    let mut head_err = 0.0;
    let mut p2 = DD::ZERO;
    let mut p4 = DD::ZERO;
    for (d, &wd) in wt.iter().enumerate().skip(1) {
        if wd.to_f64() == 0.0 {
            continue;
        }
        let d2 = (d as u64) * (d as u64);
        let f = match y_int {
            Some(yi) => (yi % d2) as f64 / d2 as f64,
            None => (y / d2 as f64).fract(),
        };
        let psi1 = psi1_of_fract(f);
        head += wd * psi1;
        // rounding of the fractional part and of Psi_1 itself
        let frac_err = match y_int {
            Some(_) => f64::EPSILON,
            None => y / d2 as f64 * f64::EPSILON,
        };
        head_err += wd.to_f64() * (0.5 * frac_err + 4.0 * f64::EPSILON * psi1);
        let inv2 = DD::from_f64(d2 as f64).recip();
        p2 += wd * inv2;
        p4 += wd * inv2 * inv2;
    }
    let [(s2, e2), (s4, e4)] = full_sums(w, r)?;
    let yd = DD::from_f64(y);
    let t2 = (s2 - p2) * yd * 0.5;
    let t4 = (s4 - p4) * yd * yd * 0.5;
    let value = head + t2 - t4;
    let partial_err = n as f64 * 8.0 * DD_EPS * s2.to_f64().max(1.0);
    let err = head_err
        + n as f64 * DD_EPS * 4.0
        + 0.5 * y * (e2 + partial_err)
        + 0.5 * y * y * (e4 + partial_err)
        + value.abs().to_f64() * 8.0 * DD_EPS;
    Ok(ApproxReal::from_dd(value, err))
}

fn finish(v: ApproxReal, eps: f64) -> Result<ApproxReal> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if v.abs_err > eps {
        return Err(Error::PrecisionUnattainable { requested: eps, attainable: v.abs_err });
    }
    Ok(v)
}

/// `G(Y, r) = sum_{(d,r)=1} h(d) int_0^{Y/d^2} psi`.
pub fn g_of(y: f64, r: u64, eps: f64) -> Result<ApproxReal> {
    finish(sawtooth_sum(Weight::H, y, r, default_split(y))?, eps)
}

/// G with an explicit split between the exact head and the Euler-product tail.
pub fn g_of_split(y: f64, r: u64, split: u64, eps: f64) -> Result<ApproxReal> {
    finish(sawtooth_sum(Weight::H, y, r, split)?, eps)
}

/// `sum_{(d,r)=1} int_0^{Y/d^2} psi`.
pub fn aux_g_unweighted(y: f64, r: u64, eps: f64) -> Result<ApproxReal> {
    finish(sawtooth_sum(Weight::One, y, r, default_split(y))?, eps)
}

pub fn aux_g_unweighted_split(y: f64, r: u64, split: u64, eps: f64) -> Result<ApproxReal> {
    finish(sawtooth_sum(Weight::One, y, r, split)?, eps)
}

/// `(phi(r)/r) (zeta(3/2)/(2 pi)) Y^{1/2}`.
pub fn aux_g_main_term(y: f64, r: u64) -> Result<ApproxReal> {
    let phi = factorize(r)?.profile().phi as f64;
    let (z, ze) = zeta_three_halves_dd();
    let k = z / (DD::PI * 2.0);
    let c = ApproxReal::from_dd(k, ze / 6.0);
    Ok(c.scale(phi / r as f64 * y.sqrt()))
}

/// `C' prod_{p|r} (1 + p/(p^2-2))^{-1} Y^{1/2}`, computed as
/// `(sum_{(t,r)=1} beta(t)/t) (phi(r)/r) (zeta(3/2)/(2 pi)) Y^{1/2}`.
pub fn g_main_term(y: f64, r: u64, eps: f64) -> Result<ApproxReal> {
    let cb = euler_constant(EulerKind::CBeta(r), eps)?;
    Ok(cb * aux_g_main_term(y, r)?)
}
