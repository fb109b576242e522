//! Summation helpers.

use num_complex::Complex64;

use super::dd::DoubleDouble;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
    terms: u64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
        self.terms += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Rigorous-style bound on the rounding error of the compensated sum:
    /// `2u|s| + O(n u^2) sum |x_i|`, with generous constants.
    pub fn error_bound(&self) -> f64 {
        let u = f64::EPSILON / 2.0;
        2.0 * u * self.value().abs() + 4.0 * (self.terms as f64) * u * u * self.abs
    }

    /// Sum of absolute values of all terms added so far.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<T: IntoIterator<Item = f64>>(&mut self, iter: T) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut s = CompensatedSum::new();
    s.extend(iter);
    s.value()
}

/// Pairwise (cascade) summation of complex terms.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        return xs.iter().copied().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Streaming pairwise summation: keeps a stack of partial sums of
/// power-of-two sized blocks, so memory stays logarithmic.
#[derive(Clone, Debug, Default)]
pub struct PairwiseAccumulator {
    block: Complex64,
    block_len: usize,
    stack: Vec<(Complex64, u32)>,
}

impl PairwiseAccumulator {
    const BLOCK: usize = 64;

    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.block += z;
        self.block_len += 1;
        if self.block_len == Self::BLOCK {
            let mut cur = (self.block, 0u32);
            self.block = Complex64::new(0.0, 0.0);
            self.block_len = 0;
            while let Some(&(s, lvl)) = self.stack.last() {
                if lvl != cur.1 {
                    break;
                }
                self.stack.pop();
                cur = (s + cur.0, lvl + 1);
            }
            self.stack.push(cur);
        }
    }

    pub fn total(&self) -> Complex64 {
        let mut acc = self.block;
        for &(s, _) in self.stack.iter().rev() {
            acc += s;
        }
        acc
    }
}

/// Double-double accumulator for real sums that must survive heavy cancellation.
pub fn dd_sum<I: IntoIterator<Item = DoubleDouble>>(iter: I) -> DoubleDouble {
    iter.into_iter().fold(DoubleDouble::ZERO, |a, b| a + b)
}
