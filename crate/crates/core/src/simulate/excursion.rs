//! Excursion point-process engine.
//!
//! The area up to the first time mark splits as A' + A'': a sum Σ τℓ over
//! the unmarked excursion points with local time below ζ, plus ζ times
//! the offset of the mark inside its excursion. The unmarked points form
//! a Poisson process with intensity (2π)^(-1/2) ℓ^(-3/2) e^(-λℓ) dτ dℓ;
//! its infinite mass near ℓ = 0 is truncated at a floor ε, optionally
//! compensated by the exact mean of the removed contribution (Campbell's
//! formula turns the removed sum into a deterministic intensity
//! integral). ζ itself is exponential with rate √(2λ) and the mark
//! offset, given ζ, is ζ·Gamma(1/2, λ).

use std::sync::Mutex;

use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::analytic::theorem1::DoubleLaplaceParams;
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_finite, integrate_semi_infinite, QuadratureConfig};
use crate::numerics::random::RandomStream;
use crate::numerics::stats::EstimateWithError;
use crate::simulate::report::McReport;
use crate::simulate::runner::run_stats;

const SQRT_2PI: f64 = 2.5066282746310002;

/// Hard ceiling on points per replication; exceeding it signals that the
/// length floor is too small for the configured cap.
pub const POISSON_CAP: u64 = 10_000_000;

/// One excursion, reduced to its local time and length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionPoint {
    pub tau: f64,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionConfig {
    pub params: DoubleLaplaceParams,
    /// Truncation floor ε on excursion lengths.
    pub length_floor: f64,
    /// Add the deterministic mean of the truncated-away mass to A'.
    pub compensate: bool,
    pub replications: u64,
}

impl ExcursionConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.length_floor > 0.0) {
            return Err(Error::Domain(format!(
                "length_floor must be > 0, got {}",
                self.length_floor
            )));
        }
        if self.replications < 1 {
            return Err(Error::Domain("replications must be >= 1".into()));
        }
        Ok(())
    }
}

/// Truncated-intensity bookkeeping, cached per (λ, ε): the point count
/// rate per unit local time and the compensator rate per ζ²/2.
#[derive(Debug, Clone)]
pub struct ExcursionSampler {
    lambda: f64,
    eps: f64,
    compensate: bool,
    /// (2π)^(-1/2) ∫_ε^∞ ℓ^(-3/2) e^(-λℓ) dℓ
    mass_per_local_time: f64,
    /// (2π)^(-1/2) ∫_0^ε ℓ^(-1/2) e^(-λℓ) dℓ
    compensator_rate: f64,
}

impl ExcursionSampler {
    pub fn new(cfg: &ExcursionConfig) -> Result<Self> {
        cfg.validate()?;
        let lambda = cfg.params.lambda;
        let eps = cfg.length_floor;
        let quad = QuadratureConfig::default();
        let mass = integrate_semi_infinite(
            |x| {
                let l = eps + x;
                l.powf(-1.5) * (-lambda * l).exp()
            },
            &quad,
        )?
        .value
            / SQRT_2PI;
        let comp = integrate_finite(
            // ℓ = u² removes the inverse-square-root endpoint
            |u| 2.0 * (-lambda * u * u).exp(),
            0.0,
            eps.sqrt(),
            &quad,
        )?
        .value
            / SQRT_2PI;
        Ok(Self {
            lambda,
            eps,
            compensate: cfg.compensate,
            mass_per_local_time: mass,
            compensator_rate: comp,
        })
    }

    pub fn mass_per_local_time(&self) -> f64 {
        self.mass_per_local_time
    }

    /// Expected truncated-away contribution to Σ τℓ for a given ζ.
    pub fn compensator(&self, zeta: f64) -> f64 {
        0.5 * zeta * zeta * self.compensator_rate
    }

    /// Draw the truncated point set below local time ζ and feed each
    /// point to the visitor. Returns the point count.
    pub fn sample_points(
        &self,
        stream: &mut RandomStream,
        zeta: f64,
        mut visit: impl FnMut(ExcursionPoint),
    ) -> Result<u64> {
        let mean = zeta * self.mass_per_local_time;
        if mean > POISSON_CAP as f64 {
            return Err(Error::SimulationBudget(format!(
                "expected point count {mean:.3e} exceeds cap {POISSON_CAP}; raise length_floor"
            )));
        }
        let n = Poisson::new(mean)
            .map_err(|e| Error::Domain(format!("poisson mean invalid: {e}")))?
            .sample(stream) as u64;
        if n > POISSON_CAP {
            return Err(Error::SimulationBudget(format!(
                "drew {n} points, over cap {POISSON_CAP}; raise length_floor"
            )));
        }
        for _ in 0..n {
            let tau = zeta * stream.uniform();
            let length = stream.truncated_excursion_length(self.lambda, self.eps)?;
            visit(ExcursionPoint { tau, length });
        }
        Ok(n)
    }

    /// One sample of A' given ζ: Σ τℓ over the truncated set, plus the
    /// compensator when configured.
    pub fn sample_a_prime(&self, stream: &mut RandomStream, zeta: f64) -> Result<f64> {
        let mut sum = 0.0;
        self.sample_points(stream, zeta, |p| sum += p.tau * p.length)?;
        if self.compensate {
            sum += self.compensator(zeta);
        }
        Ok(sum)
    }
}

/// Convenience wrapper building the cached sampler on the fly.
pub fn sample_a_prime(
    stream: &mut RandomStream,
    cfg: &ExcursionConfig,
    zeta: f64,
) -> Result<f64> {
    ExcursionSampler::new(cfg)?.sample_a_prime(stream, zeta)
}

/// One sample of A'' = ζ · Y with Y ~ Gamma(1/2, λ), the in-excursion
/// offset of the first mark.
pub fn sample_a_double_prime(
    stream: &mut RandomStream,
    lambda: f64,
    zeta: f64,
) -> Result<f64> {
    if zeta == 0.0 {
        return Ok(0.0);
    }
    if !(zeta > 0.0) {
        return Err(Error::Domain(format!("zeta must be >= 0, got {zeta}")));
    }
    Ok(zeta * stream.gamma_half(lambda)?)
}

/// Estimate E e^(-α·A(T₁)) by the excursion construction: draw
/// ζ ~ Exp(√(2λ)), assemble A' + A'' and average the exponential.
pub fn estimate_marked_time_lt(stream: &RandomStream, cfg: &ExcursionConfig) -> Result<McReport> {
    cfg.validate()?;
    let sampler = ExcursionSampler::new(cfg)?;
    let alpha = cfg.params.alpha;
    let lambda = cfg.params.lambda;
    let zeta_rate = (2.0 * lambda).sqrt();
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let stats = run_stats(stream, cfg.replications, |s| {
        let mut run = || -> Result<f64> {
            let zeta = s.exponential(zeta_rate)?;
            let a_prime = sampler.sample_a_prime(s, zeta)?;
            let a_double = sample_a_double_prime(s, lambda, zeta)?;
            Ok((-alpha * (a_prime + a_double)).exp())
        };
        match run() {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                0.0
            }
        }
    });
    if let Some(e) = failure.into_inner().unwrap().take() {
        return Err(e);
    }
    Ok(McReport::new(
        stats.to_estimate(),
        cfg.replications,
        stream.seed(),
        format!("{cfg:?}"),
    ))
}

/// Result of the Poisson-functional identity check: the empirical mean of
/// exp{-Σ f} over the truncated point process against the closed
/// exponential of the intensity integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonFunctionalReport {
    pub empirical: McReport,
    pub quadrature: EstimateWithError,
    pub difference: f64,
    pub z_score: f64,
}

/// Check E exp{-Σ ατℓ} = exp{-∬ (1 - e^(-ατℓ)) dΛ'} on [0,ζ]×[ε,∞),
/// with the right side by nested quadrature. α = 0 is allowed and makes
/// both sides exactly one.
pub fn poisson_functional_check(
    stream: &RandomStream,
    zeta: f64,
    lambda: f64,
    alpha: f64,
    eps: f64,
    reps: u64,
) -> Result<PoissonFunctionalReport> {
    if !(zeta > 0.0) || !(lambda > 0.0) || !(eps > 0.0) || alpha < 0.0 {
        return Err(Error::Domain(
            "poisson_functional_check needs zeta, lambda, eps > 0 and alpha >= 0".into(),
        ));
    }
    let cfg = ExcursionConfig {
        params: DoubleLaplaceParams::new(alpha.max(f64::MIN_POSITIVE), lambda)?,
        length_floor: eps,
        compensate: false,
        replications: reps,
    };
    let sampler = ExcursionSampler::new(&cfg)?;
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let stats = run_stats(stream, reps, |s| {
        let mut sum = 0.0;
        match sampler.sample_points(s, zeta, |p| sum += alpha * p.tau * p.length) {
            Ok(_) => (-sum).exp(),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                0.0
            }
        }
    });
    if let Some(e) = failure.into_inner().unwrap().take() {
        return Err(e);
    }

    let quad_cfg = QuadratureConfig::default();
    let inner = |tau: f64| -> f64 {
        if alpha * tau == 0.0 {
            return 0.0;
        }
        integrate_semi_infinite(
            |x| {
                let l = eps + x;
                (1.0 - (-alpha * tau * l).exp()) * l.powf(-1.5) * (-lambda * l).exp()
            },
            &quad_cfg,
        )
        .map(|e| e.value)
        .unwrap_or(f64::NAN)
            / SQRT_2PI
    };
    let exponent = integrate_finite(inner, 0.0, zeta, &quad_cfg)?;
    let reference = EstimateWithError::quadrature(
        (-exponent.value).exp(),
        (-exponent.value).exp() * exponent.error,
    );

    let empirical = McReport::new(
        stats.to_estimate(),
        reps,
        stream.seed(),
        format!("zeta={zeta} lambda={lambda} alpha={alpha} eps={eps}"),
    );
    let difference = empirical.estimate.value - reference.value;
    let z = empirical.z_score(reference.value);
    Ok(PoissonFunctionalReport { empirical, quadrature: reference, difference, z_score: z })
}
