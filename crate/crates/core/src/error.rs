use thiserror::Error;

/// Errors produced by the numerical kernels and simulation engines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not converge within the configured term budget.
    #[error("series did not converge within {budget} terms (last term {last_term:e})")]
    SeriesBudget { budget: usize, last_term: f64 },

    /// Alternating-series cancellation destroyed too much working precision.
    /// `index` is the ratio of the largest term magnitude to the final sum.
    #[error("cancellation index {index:.3e} exceeds threshold {threshold:.1e}; result unreliable")]
    Cancellation { index: f64, threshold: f64 },

    /// Adaptive quadrature ran out of refinements. The best estimate and its
    /// error bound at the point of giving up are carried along.
    #[error("quadrature refinement budget exceeded (best estimate {estimate:e}, bound {bound:e})")]
    QuadratureBudget { estimate: f64, bound: f64 },

    /// A sampling loop exceeded its configured budget.
    #[error("simulation budget exceeded: {0}")]
    SimulationBudget(String),

    /// A Laplace-inversion contour produced numerically meaningless node sums.
    #[error("contour instability: {0}")]
    ContourInstability(String),

    /// A tail probe saw too few exceedances to report a probability.
    #[error("insufficient tail hits at x={x}: got {hits}, need {required}")]
    InsufficientHits { x: f64, hits: u64, required: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
