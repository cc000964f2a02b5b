//! Distribution toolkit for A = ∫₀¹ S(t) dt, the area under the running
//! maximum of a standard Brownian motion on the unit interval.
//!
//! The crate evaluates the closed forms attached to A — integer moments,
//! the Laplace transform ψ(s) = E e^(-sA) in two series representations,
//! the double-transform identity that links ψ to an elementary integral,
//! and the conditional transforms of the excursion decomposition — and
//! validates each of them independently by quadrature identities and by
//! two Monte Carlo constructions: direct path discretization with a
//! running maximum, and an excursion point-process engine built from a
//! marked Poisson process. A numerical Laplace inversion recovers the
//! density of A on a grid together with tail diagnostics.
//!
//! Everything is deterministic given a seed: random streams are
//! counter-based and splittable, so results are byte-identical across
//! thread counts.

pub mod analytic;
pub mod density;
pub mod error;
pub mod numerics;
pub mod simulate;

pub use error::{Error, Result};

/// Artifact version stamped into every CLI report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
