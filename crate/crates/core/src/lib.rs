//! Computational toolkit for squarefree numbers in arithmetic progressions:
//! exact counts, variances and correlations, Euler-product constants,
//! sawtooth integrals and complete exponential sums.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments, clippy::needless_range_loop, clippy::type_complexity)]

pub mod arith;
pub mod asymptotics;
pub mod counters;
pub mod error;
pub mod expsums;
pub mod multiplicative;
pub mod numeric;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::ApproxReal;
pub use report::{Mode, VerificationRecord};
