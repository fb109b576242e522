use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::euler::{constant_f64, euler_constant, EulerKind};
use crate::arith::factor::{factorize, Factorization};
use crate::arith::modular::gcd;
use crate::error::{invalid, Error, Result};
use crate::numeric::ApproxReal;

fn rat(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// kappa(p) = (p^2-p-1)/(p^2-1), kappa(p^2) = (p^2-p)/(p^2-1), 0 beyond.
pub fn kappa_prime_power(p: u64, e: u32) -> BigRational {
    let p = p as i128;
    match e {
        0 => BigRational::one(),
        1 => rat(p * p - p - 1, p * p - 1),
        2 => rat(p * p - p, p * p - 1),
        _ => BigRational::zero(),
    }
}

pub fn kappa(l: u64) -> Result<BigRational> {
    if l == 0 {
        return Err(invalid("kappa is defined for l >= 1"));
    }
    Ok(kappa_of(&factorize(l)?))
}

pub fn kappa_of(f: &Factorization) -> BigRational {
    f.factors.iter().map(|&(p, e)| kappa_prime_power(p, e)).product()
}

/// h(d) = mu^2(d) prod_{p|d} (1 - 2/p^2)^-1.
pub fn h_of(d: u64) -> Result<BigRational> {
    if d == 0 {
        return Err(invalid("h is defined for d >= 1"));
    }
    let f = factorize(d)?;
    if !f.is_squarefree() {
        return Ok(BigRational::zero());
    }
    Ok(f.primes().map(|p| rat((p * p) as i128, (p * p) as i128 - 2)).product())
}

pub fn beta_prime_power(p: u64, e: u32) -> BigRational {
    let p2 = (p * p) as i128;
    match e {
        0 => BigRational::one(),
        1 => rat(2, p2 - 2),
        2 => rat(-p2, p2 - 2),
        _ => BigRational::zero(),
    }
}

/// The multiplicative function with `h = 1 * beta`.
pub fn beta_of(t: u64) -> Result<BigRational> {
    if t == 0 {
        return Err(invalid("beta is defined for t >= 1"));
    }
    Ok(factorize(t)?.factors.iter().map(|&(p, e)| beta_prime_power(p, e)).product())
}

/// (sqrt(m)+1-sqrt(m-1))/m for m > 0, (sqrt(1-m)-sqrt(-m)-1)/(-m) for m < 0.
pub fn gamma_an(m: i64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m must be nonzero"));
    }
    let mf = m as f64;
    Ok(if m > 0 {
        (mf.sqrt() + 1.0 - (mf - 1.0).sqrt()) / mf
    } else {
        ((1.0 - mf).sqrt() - (-mf).sqrt() - 1.0) / (-mf)
    })
}

/// Local factor of Gamma_ar at a prime dividing m exactly once.
pub fn gamma_ar_local(p: u64) -> f64 {
    let pf = p as f64;
    let s = pf.sqrt();
    1.0 / (1.0 + (pf + s + 1.0) / (pf * s + s + 1.0))
}

/// prod_{p|m} (1 + (p+sqrt p+1)/(p^{3/2}+sqrt p+1))^-1 for squarefree m.
pub fn gamma_ar(m: i64) -> Result<f64> {
    let f = squarefree_abs(m)?;
    Ok(f.primes().map(gamma_ar_local).product())
}

fn squarefree_abs(m: i64) -> Result<Factorization> {
    if m == 0 {
        return Err(invalid("m must be nonzero"));
    }
    let f = factorize(m.unsigned_abs())?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(m));
    }
    Ok(f)
}

fn check_coprime(m: i64, q: u64) -> Result<()> {
    if q == 0 {
        return Err(invalid("q must be positive"));
    }
    let g = gcd(m.unsigned_abs(), q);
    if g != 1 {
        return Err(Error::NotCoprime { a: m, b: q, g });
    }
    Ok(())
}

/// prod_{p|m} (p^2-1)/(p^2-2) * prod_{p|q} (p^2-p)/(p^2-2): the part of f_q
/// that does not depend on l or on the infinite product.
pub fn f_q_prefactor(m: i64, q: u64) -> Result<BigRational> {
    let fm = squarefree_abs(m)?;
    check_coprime(m, q)?;
    let mut acc = BigRational::one();
    for p in fm.primes() {
        let p2 = (p * p) as i128;
        acc *= rat(p2 - 1, p2 - 2);
    }
    for p in factorize(q)?.primes() {
        let p2 = (p * p) as i128;
        acc *= rat(p2 - p as i128, p2 - 2);
    }
    Ok(acc)
}

/// kappa((l, m^2)) * prod_{p^2 | l, p not dividing mq} (p^2-1)/(p^2-2).
pub fn f_q_l_part(l: i64, m: i64, q: u64) -> Result<BigRational> {
    if l == 0 {
        return Err(invalid("l = 0 goes through f_q_zero"));
    }
    let m_abs = m.unsigned_abs();
    let m2 = m_abs as u128 * m_abs as u128;
    let g = gcd_u128(l.unsigned_abs() as u128, m2) as u64;
    let mut acc = kappa(g)?;
    for (p, e) in factorize(l.unsigned_abs())?.factors {
        if e >= 2 && !m_abs.is_multiple_of(p) && !q.is_multiple_of(p) {
            let p2 = (p * p) as i128;
            acc *= rat(p2 - 1, p2 - 2);
        }
    }
    Ok(acc)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The exact rational cofactor of C2 in f_q(l, m).
pub fn f_q_rational(l: i64, m: i64, q: u64) -> Result<BigRational> {
    let pre = f_q_prefactor(m, q)?;
    Ok(pre * f_q_l_part(l, m, q)?)
}

/// f_q(l, m) for l != 0; the error comes only from C2.
pub fn f_q_of(l: i64, m: i64, q: u64, eps: f64) -> Result<ApproxReal> {
    let r = f_q_rational(l, m, q)?;
    let rf = super::euler::rational_to_f64(&r);
    // leave room for the rounding of the rational cofactor
    let c2 = euler_constant(EulerKind::C2, eps / rf.max(1.0) / 2.0)?;
    let v = c2 * ApproxReal::new(rf, rf.abs() * f64::EPSILON);
    if v.abs_err > eps {
        return Err(Error::PrecisionUnattainable { requested: eps, attainable: v.abs_err });
    }
    Ok(v)
}

/// f_q(0, m) = phi(|m|q)/(|m|q) * C(|m|q).
pub fn f_q_zero(m: i64, q: u64, eps: f64) -> Result<ApproxReal> {
    squarefree_abs(m)?;
    check_coprime(m, q)?;
    let mq = m.unsigned_abs() * q;
    let phi = factorize(mq)?.profile().phi;
    let ratio = phi as f64 / mq as f64;
    let c = euler_constant(EulerKind::COfQ(mq), eps / 2.0)?;
    let v = c * ApproxReal::new(ratio, ratio * f64::EPSILON);
    if v.abs_err > eps {
        return Err(Error::PrecisionUnattainable { requested: eps, attainable: v.abs_err });
    }
    Ok(v)
}

/// Local factors at `p` of f_q(0, m): the literal product definition with
/// l = 0 (so `(l, m^2) = m^2` and every `p^2 | 0`), and the factor of the
/// closed form `phi(mq)/(mq) C(mq)`. Returned as `(literal, closed)`.
pub fn f_q_zero_local_factors(p: u64, m: i64, q: u64) -> (BigRational, BigRational) {
    let pi = p as i128;
    let p2 = pi * pi;
    let pm = m.unsigned_abs().is_multiple_of(p);
    let pq = q.is_multiple_of(p);
    let mut literal = rat(p2 - 2, p2);
    if pm {
        literal *= rat(p2 - 1, p2 - 2);
        literal *= kappa_prime_power(p, 2);
    }
    if pq {
        literal *= rat(p2 - pi, p2 - 2);
    }
    if !pm && !pq {
        literal *= rat(p2 - 1, p2 - 2);
    }
    // 6/pi^2 contributes (1 - p^-2); C(mq) divides it out at p | mq, where
    // phi(mq)/(mq) contributes (1 - 1/p).
    let closed = if pm || pq { rat(pi - 1, pi) } else { rat(p2 - 1, p2) };
    (literal, closed)
}

/// Local factor `1 - u_p(0)/p^2` at p not dividing q, from the counting
/// definition in the derivation of f_q.
pub fn f_q_zero_counting_factor(p: u64, m: i64) -> BigRational {
    let u = if m.unsigned_abs().is_multiple_of(p) { p } else { 1 };
    let p2 = (p * p) as i128;
    rat(p2 - u as i128, p2)
}

/// Table of f_q(l, m) for `1 <= l <= len`, built by sieving over prime
/// squares. Values are f64 with relative error a few ulps beyond C2.
#[derive(Clone, Debug)]
pub struct FqTable {
    pub m: i64,
    pub q: u64,
    values: Vec<f64>,
}

impl FqTable {
    pub fn new(m: i64, q: u64, len: usize) -> Result<Self> {
        let base = constant_f64(EulerKind::C2) * super::euler::rational_to_f64(&f_q_prefactor(m, q)?);
        let m_abs = m.unsigned_abs();
        let mut values = vec![base; len + 1];
        values[0] = f64::NAN;
        let root = crate::arith::factor::isqrt(len as u64);
        for &p in crate::arith::primes::primes_up_to(root).iter() {
            if m_abs.is_multiple_of(p) || q.is_multiple_of(p) {
                continue;
            }
            let p2 = p * p;
            let factor = (p2 - 1) as f64 / (p2 - 2) as f64;
            let mut k = p2 as usize;
            while k <= len {
                values[k] *= factor;
                k += p2 as usize;
            }
        }
        if m_abs > 1 {
            // kappa((l, m^2)) depends on l mod m^2 only through the gcd
            let fm = factorize(m_abs)?;
            for &(p, _) in &fm.factors {
                let k1 = super::euler::rational_to_f64(&kappa_prime_power(p, 1));
                let k2 = super::euler::rational_to_f64(&kappa_prime_power(p, 2));
                let p = p as usize;
                let mut k = p;
                while k <= len {
                    values[k] *= if k.is_multiple_of(p * p) { k2 } else { k1 };
                    k += p;
                }
            }
        }
        Ok(Self { m, q, values })
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// f_q(l, m) for `1 <= |l| <= len`.
    #[inline]
    pub fn get(&self, l: i64) -> f64 {
        self.values[l.unsigned_abs() as usize]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values[1..]
    }
}

/// True if gcd(|m|, q) = 1 and m is a nonzero squarefree integer.
pub fn valid_pair(m: i64, q: u64) -> bool {
    m != 0 && q != 0 && gcd(m.unsigned_abs(), q) == 1 && crate::arith::factor::is_squarefree(m.unsigned_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(1).unwrap(), rat(1, 1));
        assert_eq!(kappa(2).unwrap(), rat(1, 3));
        assert_eq!(kappa(8).unwrap(), rat(0, 1));
        assert_eq!(kappa(4).unwrap(), rat(2, 3));
        assert!(kappa(0).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_of(1).unwrap(), rat(1, 1));
        assert_eq!(h_of(2).unwrap(), rat(2, 1));
        assert_eq!(h_of(12).unwrap(), rat(0, 1));
        assert_eq!(h_of(6).unwrap(), rat(18, 7));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_of(2).unwrap(), rat(1, 1));
        assert_eq!(beta_of(4).unwrap(), rat(-2, 1));
        assert_eq!(beta_of(8).unwrap(), rat(0, 1));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_an(1).unwrap(), 2.0);
        assert!((gamma_an(-1).unwrap() - (2f64.sqrt() - 2.0)).abs() < 1e-15);
        assert!((gamma_an(2).unwrap() - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(gamma_an(0).is_err());
        assert_eq!(gamma_ar(1).unwrap(), 1.0);
        assert_eq!(gamma_ar(-1).unwrap(), 1.0);
        let s = 2f64.sqrt();
        let expect = 1.0 / (1.0 + (3.0 + s) / (3.0 * s + 1.0));
        assert!((gamma_ar(2).unwrap() - expect).abs() < 1e-15);
        assert!((gamma_ar(2).unwrap() - 0.5429).abs() < 1e-4);
        assert!(matches!(gamma_ar(4), Err(Error::NotSquarefree(4))));
    }

    #[test]
    fn f_q_examples() {
        let c2 = constant_f64(EulerKind::C2);
        let v = f_q_of(1, 1, 1, 1e-12).unwrap();
        assert!((v.value - 0.322_634_098).abs() < 1e-9);
        let v4 = f_q_of(4, 1, 1, 1e-12).unwrap();
        assert!((v4.value - 1.5 * c2).abs() < 1e-15);
        for l in [1i64, 2, 12, 36, 50, 98] {
            for (m, q) in [(1i64, 1u64), (2, 5), (-3, 4), (6, 7)] {
                let a = f_q_of(l, m, q, 1e-12).unwrap();
                let b = f_q_of(-l, m, q, 1e-12).unwrap();
                assert_eq!(a, b);
            }
        }
        assert!(f_q_of(0, 1, 1, 1e-12).is_err());
        assert!(matches!(f_q_of(1, 2, 4, 1e-12), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn f_q_zero_examples() {
        let v = f_q_zero(1, 1, 1e-12).unwrap();
        assert!((v.value - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-15);
        let v = f_q_zero(2, 1, 1e-12).unwrap();
        let expect = 0.5 * 6.0 / std::f64::consts::PI.powi(2) / 0.75;
        assert!((v.value - expect).abs() < 1e-15);
        assert!(f_q_zero(2, 6, 1e-12).is_err());
    }

    #[test]
    fn table_matches_pointwise() {
        for (m, q) in [(1i64, 1u64), (2, 5), (-3, 4), (6, 7), (-5, 12)] {
            let t = FqTable::new(m, q, 2000).unwrap();
            for l in 1..=2000i64 {
                let exact = f_q_of(l, m, q, 1e-12).unwrap();
                assert!((t.get(l) - exact.value).abs() <= 1e-15 * exact.value.abs() + exact.abs_err, "l={l} m={m} q={q}");
            }
        }
    }
}
