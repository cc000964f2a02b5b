//! Closed forms for the area distribution: moments, the transform ψ in
//! its series / hypergeometric / product representations, the
//! double-transform identity, conditional excursion transforms, and the
//! tail asymptotics.

pub mod conditional;
pub mod moments;
pub mod psi;
pub mod tail;
pub mod theorem1;

pub use conditional::{
    conditional_lt_a_double_prime, conditional_lt_a_prime, conditional_split, ConditionalSplit,
};
pub use moments::{exact_moment, moment_asymptote, moment_asymptote_log, MomentResult};
pub use psi::{
    psi_hypergeometric, psi_series, psi_stable, psi_stable_real, CANCELLATION_LIMIT,
    SERIES_RADIUS,
};
pub use tail::{conjectured_density, conjectured_prefactor, tail_log_asymptote};
pub use theorem1::{
    moment_from_lhs_differences, theorem1_lhs, theorem1_rhs, DoubleLaplaceParams,
};
