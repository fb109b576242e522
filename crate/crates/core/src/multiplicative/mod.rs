//! Multiplicative functions, Euler-product constants and their identities.

pub mod euler;
pub mod functions;
pub mod identities;

pub use euler::{euler_constant, euler_constant_dd, EulerKind, LocalFactor};
pub use functions::{beta_of, f_q_of, f_q_zero, gamma_an, gamma_ar, h_of, kappa, FqTable};
pub use identities::identity_suite;
