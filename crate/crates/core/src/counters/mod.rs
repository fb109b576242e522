//! Exact enumerative quantities.

pub mod lattice;
pub mod local;
pub mod variance;

pub use lattice::{divisor_triple_sum, lattice_count_n, LatticeCount};
pub use local::{interval_i, n_d_count, u_p_local, IntervalIL, NdCount};
pub use variance::{
    croft_variance, dispersion_check, double_sum_s, error_vector, hooley_report, variance_m2, CorrelationResult,
    ResidueCounts, ResidueErrorVector,
};
