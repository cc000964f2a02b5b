//! Two independent Monte Carlo engines for the area variable: direct
//! path discretization with a running maximum, and the excursion
//! point-process construction of the area up to an exponential mark.
//!
//! Replications are partitioned into fixed-size blocks; each block draws
//! from its own child random stream and the block statistics merge in
//! block order, so a report depends only on (seed, config) and never on
//! the number of worker threads.

pub mod excursion;
pub mod path;
pub mod report;
mod runner;

pub use excursion::{
    estimate_marked_time_lt, poisson_functional_check, sample_a_double_prime, sample_a_prime,
    ExcursionConfig, ExcursionPoint, ExcursionSampler, PoissonFunctionalReport,
};
pub use path::{estimate_moments_mc, scaling_check, simulate_area_path, PathConfig, Scheme};
pub use report::McReport;
pub(crate) use runner::run_stats_multi;
