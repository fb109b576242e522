//! Segmented squarefree sieve.
//!
//! Marks multiples of p^2 for every prime p <= sqrt(hi). The window is cut
//! into segments of 2^20 integers that are sieved independently (and in
//! parallel) and then packed into a `u64` bitmap.

use rayon::prelude::*;
use serde::Serialize;

use super::factor::isqrt;
use super::primes::{for_each_prime_in, shared_primes};
use crate::error::{invalid, Result};

const SEGMENT: u64 = 1 << 20;
/// Above this bound the sieving primes are generated segment-wise instead of
/// being taken from the shared table.
const TABLE_LIMIT: u64 = 1 << 24;

/// Squarefree indicator over `[lo, hi)`. Bit `i` is set iff `lo + i` is
/// squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveWindow {
    pub lo: u64,
    pub hi: u64,
    pub flags: Vec<u64>,
}

impl SieveWindow {
    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Panics if `n` lies outside the window.
    #[inline]
    pub fn is_squarefree(&self, n: u64) -> bool {
        assert!(n >= self.lo && n < self.hi, "{n} outside [{}, {})", self.lo, self.hi);
        let i = n - self.lo;
        self.flags[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.flags.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of squarefree integers in `[lo, n]` (clamped to the window).
    pub fn count_up_to(&self, n: u64) -> u64 {
        if n < self.lo {
            return 0;
        }
        let end = (n - self.lo + 1).min(self.len());
        let full = (end / 64) as usize;
        let mut c: u64 = self.flags[..full].iter().map(|w| w.count_ones() as u64).sum();
        let rem = end % 64;
        if rem > 0 {
            c += (self.flags[full] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        c
    }

    /// Squarefree integers of the window in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let lo = self.lo;
        self.flags.iter().enumerate().flat_map(move |(wi, &w)| {
            let base = lo + 64 * wi as u64;
            BitIter(w).map(move |b| base + b as u64)
        })
    }

    /// Counts of squarefree `n` in the window with `n <= upto`, split by
    /// `n mod q`.
    pub fn counts_by_residue(&self, q: u64, upto: u64) -> Vec<u64> {
        let mut counts = vec![0u64; q as usize];
        for n in self.iter() {
            if n > upto {
                break;
            }
            counts[(n % q) as usize] += 1;
        }
        counts
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(t)
    }
}

fn sieve_segment(lo: u64, hi: u64, primes: &[u64], words: &mut [u64]) {
    let len = (hi - lo) as usize;
    let mut bytes = vec![1u8; len];
    for &p in primes {
        let sq = p * p;
        if sq >= hi {
            break;
        }
        mark(&mut bytes, lo, hi, sq);
    }
    if hi > TABLE_LIMIT * TABLE_LIMIT {
        // primes beyond the table: each has at most a handful of multiples here
        let from = primes.last().map_or(2, |&p| p + 1);
        for_each_prime_in(from, isqrt(hi - 1) + 1, |p| mark(&mut bytes, lo, hi, p * p));
    }
    pack(&bytes, words);
}

#[inline]
fn mark(bytes: &mut [u8], lo: u64, hi: u64, sq: u64) {
    let mut k = lo.div_ceil(sq) * sq;
    while k < hi {
        bytes[(k - lo) as usize] = 0;
        k += sq;
    }
}

fn pack(bytes: &[u8], words: &mut [u64]) {
    for (w, chunk) in words.iter_mut().zip(bytes.chunks(64)) {
        let mut acc = 0u64;
        for (i, &b) in chunk.iter().enumerate() {
            acc |= (b as u64) << i;
        }
        *w = acc;
    }
}

/// Sieve `[lo, hi)` for squarefree integers.
pub fn squarefree_window(lo: u64, hi: u64) -> Result<SieveWindow> {
    if hi <= lo {
        return Err(invalid(format!("empty window [{lo}, {hi})")));
    }
    if hi > 1 << 63 {
        return Err(invalid("window end exceeds 2^63"));
    }
    let root = isqrt(hi - 1);
    let primes = shared_primes(root.min(TABLE_LIMIT));
    let primes: &[u64] = &primes[..primes.partition_point(|&p| p <= root.min(TABLE_LIMIT))];
    let nwords = (hi - lo).div_ceil(64) as usize;
    let mut flags = vec![0u64; nwords];
    let seg_words = (SEGMENT / 64) as usize;
    flags
        .par_chunks_mut(seg_words)
        .enumerate()
        .for_each(|(i, words)| {
            let s_lo = lo + i as u64 * SEGMENT;
            let s_hi = (s_lo + SEGMENT).min(hi);
            sieve_segment(s_lo, s_hi, primes, words);
        });
    if lo == 0 {
        flags[0] &= !1;
    }
    Ok(SieveWindow { lo, hi, flags })
}

/// Number of squarefree `n` in `[1, x]`.
pub fn squarefree_count(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let w = squarefree_window(1, x + 1).expect("valid window");
    w.count()
}

/// Counts of squarefree `n <= X` in each class `a mod q`, `0 <= a < q`.
pub fn squarefree_counts_by_residue(x: u64, q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(invalid("modulus must be positive"));
    }
    if q > x {
        return Err(invalid(format!("q = {q} exceeds X = {x}")));
    }
    let w = squarefree_window(1, x + 1)?;
    Ok(w.counts_by_residue(q, x))
}

/// `Q(X) = sum_{d <= sqrt X} mu(d) floor(X / d^2)`, computed independently of
/// the sieve from a Möbius table.
pub fn squarefree_count_mobius(x: u64) -> u64 {
    let r = isqrt(x) as usize;
    let mu = mobius_table(r);
    let mut total: i128 = 0;
    for d in 1..=r {
        if mu[d] != 0 {
            total += mu[d] as i128 * (x / (d as u64 * d as u64)) as i128;
        }
    }
    total as u64
}

/// Möbius function for `0..=n` by a linear sieve (`mu[0] = 0`).
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    mu[0] = 0;
    for i in 2..=n {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            if i * p > n {
                break;
            }
            is_comp[i * p] = true;
            if i % p == 0 {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor::is_squarefree;

    #[test]
    fn first_window() {
        let w = squarefree_window(1, 11).unwrap();
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![1, 2, 3, 5, 6, 7, 10]);
        let w = squarefree_window(8, 10).unwrap();
        assert_eq!(w.count(), 0);
        assert!(squarefree_window(5, 5).is_err());
        assert!(!squarefree_window(0, 2).unwrap().is_squarefree(0));
    }

    #[test]
    fn million() {
        assert_eq!(squarefree_count(1_000_000), 607_926);
        assert_eq!(squarefree_count_mobius(1_000_000), 607_926);
    }

    #[test]
    fn matches_trial_division() {
        let w = squarefree_window(1, 10_001).unwrap();
        for n in 1..=10_000u64 {
            assert_eq!(w.is_squarefree(n), is_squarefree(n), "n = {n}");
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(squarefree_counts_by_residue(10, 3).unwrap(), vec![2, 3, 2]);
        assert_eq!(squarefree_counts_by_residue(10, 1).unwrap(), vec![7]);
        assert!(squarefree_counts_by_residue(10, 0).is_err());
        assert!(squarefree_counts_by_residue(10, 11).is_err());
    }

    #[test]
    fn count_up_to_matches_prefix() {
        let w = squarefree_window(1, 3001).unwrap();
        for n in [0u64, 1, 63, 64, 65, 128, 1000, 3000, 5000] {
            let brute = (1..=n.min(3000)).filter(|&k| is_squarefree(k)).count() as u64;
            assert_eq!(w.count_up_to(n), brute);
        }
    }

    #[test]
    fn high_window() {
        let lo = (1u64 << 50) + 12345;
        let w = squarefree_window(lo, lo + 500).unwrap();
        for n in lo..lo + 500 {
            assert_eq!(w.is_squarefree(n), is_squarefree(n), "n = {n}");
        }
    }

    #[test]
    fn mobius_table_small() {
        assert_eq!(mobius_table(10), vec![0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
