//! Sawtooth integrals, the sums G, frakS and A, and the main terms.

pub mod calibrate;
pub mod gsum;
pub mod mainterms;
pub mod sawtooth;

pub use calibrate::{calibrate, Calibration};
pub use gsum::{aux_g_main_term, aux_g_unweighted, g_main_term, g_of};
pub use mainterms::{
    a_decomposition, a_exact, a_formula, frak_s_exact, frak_s_formula, frak_s_formula_printed, theorem_main_terms,
    MainTermBreakdown, TheoremMainTerms,
};
pub use sawtooth::{psi, psi_antiderivative, psi_mellin_integral, psi_mellin_limit};
