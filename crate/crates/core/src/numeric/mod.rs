//! Extended-precision and error-tracked numerics.

pub mod approx;
pub mod dd;
pub mod sum;
pub mod zeta;

pub use approx::ApproxReal;
pub use dd::DoubleDouble;
