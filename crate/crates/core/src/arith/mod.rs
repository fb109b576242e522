//! Exact integer arithmetic.

pub mod factor;
pub mod modular;
pub mod primes;
pub mod sieve;

pub use factor::{factorize, multiplicative_profile, Factorization, MultiplicativeProfile};
pub use modular::{gcd, jacobi_symbol, mod_inverse};
pub use sieve::{squarefree_counts_by_residue, squarefree_window, SieveWindow};
