//! Numerical kernel: special functions, quadrature, reproducible random
//! sampling and streaming statistics.

pub(crate) mod dd;
pub mod gamma;
pub mod hypergeometric;
pub mod quadrature;
pub mod random;
pub mod stats;

pub use gamma::{gamma, log_gamma};
pub use hypergeometric::hyp_pfq;
pub use quadrature::{
    adaptive_finite, integrate_finite, integrate_semi_infinite, QuadValue, QuadratureConfig,
};
pub use random::RandomStream;
pub use stats::{CompensatedSum, ErrorKind, EstimateWithError, RunningStats};
