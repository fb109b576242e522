//! Complete exponential sums: Kloosterman, Gauss, the `S_1`/`S_2` family
//! and the CRT factorization of the mixed character sum.

pub mod crt;
pub mod sums;
pub mod sweeps;

pub use crt::{crt_factor_check, crt_full_sum, crt_product};
pub use sums::{gauss_sum, k2_sum, kloosterman_k, s1_literal, s1_sum, s2_literal, s2_sum, ExpSumValue, SumKind};
pub use sweeps::expsums_suite;
