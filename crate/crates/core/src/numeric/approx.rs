use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::dd::{DoubleDouble, DD_EPS};

/// A real number together with a bound on its absolute error.
///
/// The true quantity lies in `[value - abs_err, value + abs_err]`. Arithmetic
/// propagates worst-case bounds and adds one rounding unit of the result so
/// that the enclosure survives the f64 operation itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxReal {
    pub value: f64,
    pub abs_err: f64,
}

#[inline]
fn ulp_of(x: f64) -> f64 {
    x.abs() * f64::EPSILON
}

impl ApproxReal {
    pub fn new(value: f64, abs_err: f64) -> Self {
        debug_assert!(abs_err >= 0.0 && abs_err.is_finite(), "bad error bound {abs_err}");
        Self { value, abs_err }
    }

    /// An exactly known value (e.g. an integer count).
    pub fn exact(value: f64) -> Self {
        Self { value, abs_err: 0.0 }
    }

    /// Rounds a double-double enclosure to f64, keeping the bound sound.
    pub fn from_dd(x: DoubleDouble, err: f64) -> Self {
        let value = x.to_f64();
        let rounding = (x - DoubleDouble::from_f64(value)).abs().to_f64();
        Self {
            value,
            abs_err: err + rounding + x.abs().to_f64() * DD_EPS * 4.0,
        }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.abs_err
    }

    pub fn hi(&self) -> f64 {
        self.value + self.abs_err
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.abs_err
    }

    /// True if the two enclosures intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        (self.value - other.value).abs() <= self.abs_err + other.abs_err
    }

    pub fn scale(self, k: f64) -> Self {
        let value = self.value * k;
        Self::new(value, self.abs_err * k.abs() + ulp_of(value))
    }

    pub fn sqrt(self) -> Self {
        let value = self.value.max(0.0).sqrt();
        // |sqrt(a) - sqrt(b)| <= |a - b| / sqrt(min)
        let lo = self.lo().max(0.0).sqrt();
        let err = if lo > 0.0 {
            self.abs_err / (lo + value)
        } else {
            self.abs_err.sqrt()
        };
        Self::new(value, err + ulp_of(value))
    }

    pub fn recip(self) -> Self {
        assert!(self.lo() > 0.0 || self.hi() < 0.0, "reciprocal of an interval containing 0");
        let value = 1.0 / self.value;
        let m = self.lo().abs().min(self.hi().abs());
        Self::new(value, self.abs_err / (m * self.value.abs()) + ulp_of(value))
    }

    pub fn powi(self, n: i32) -> Self {
        let mut acc = Self::exact(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Add for ApproxReal {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let value = self.value + b.value;
        Self::new(value, self.abs_err + b.abs_err + ulp_of(value))
    }
}

impl Sub for ApproxReal {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        let value = self.value - b.value;
        Self::new(value, self.abs_err + b.abs_err + ulp_of(value))
    }
}

impl Neg for ApproxReal {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.abs_err)
    }
}

impl Mul for ApproxReal {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let value = self.value * b.value;
        let err = self.value.abs() * b.abs_err + b.value.abs() * self.abs_err + self.abs_err * b.abs_err;
        Self::new(value, err + ulp_of(value))
    }
}

impl std::iter::Sum for ApproxReal {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::exact(0.0), |a, b| a + b)
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.1e}", self.value, self.abs_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{FromPrimitive, ToPrimitive};
    use proptest::prelude::*;

    fn rat(x: f64) -> BigRational {
        BigRational::from_f64(x).unwrap()
    }

    proptest! {
        // Enclosures built from exact rationals must still contain the exact
        // rational result after f64 arithmetic.
        #[test]
        fn arithmetic_is_sound(a in -1e3f64..1e3, b in -1e3f64..1e3, ea in 0f64..1e-3, eb in 0f64..1e-3,
                               da in -1f64..1.0, db in -1f64..1.0) {
            let x = ApproxReal::new(a, ea);
            let y = ApproxReal::new(b, eb);
            // exact representatives inside the enclosures
            let xa = rat(a) + rat(ea * da);
            let yb = rat(b) + rat(eb * db);
            let sum = x + y;
            let prod = x * y;
            let diff = x - y;
            let exact_sum = (&xa + &yb).to_f64().unwrap();
            let exact_prod = (&xa * &yb).to_f64().unwrap();
            let exact_diff = (&xa - &yb).to_f64().unwrap();
            prop_assert!((exact_sum - sum.value).abs() <= sum.abs_err * (1.0 + 1e-12) + 1e-300);
            prop_assert!((exact_prod - prod.value).abs() <= prod.abs_err * (1.0 + 1e-12) + 1e-300);
            prop_assert!((exact_diff - diff.value).abs() <= diff.abs_err * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn product_bound_formula() {
        let a = ApproxReal::new(2.0, 0.1);
        let b = ApproxReal::new(3.0, 0.2);
        let p = a * b;
        assert!((p.abs_err - (2.0 * 0.2 + 3.0 * 0.1 + 0.02)).abs() < 1e-14);
    }

    #[test]
    fn from_dd_keeps_low_part() {
        let x = DoubleDouble::from_ratio(1, 3);
        let a = ApproxReal::from_dd(x, 0.0);
        assert!(a.abs_err > 0.0 && a.abs_err < 1e-16);
    }
}
