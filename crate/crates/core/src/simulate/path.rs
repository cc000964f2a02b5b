//! Path-discretization engine: sample the Brownian path on a uniform
//! grid, track the running maximum, and integrate it.
//!
//! The discrete maximum sits below the true supremum, so every area
//! sample carries a one-sided negative bias that shrinks like
//! β₁·√(T/n) with β₁ ≈ 0.5826 (the discrete-monitoring constant);
//! consumers that compare against exact moments apply
//! [`discretization_bias`] as the documented allowance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::random::RandomStream;
use crate::simulate::report::McReport;
use crate::simulate::runner::{run_stats, run_stats_multi};

/// Discrete-monitoring constant −ζ(1/2)/√(2π).
pub const MONITORING_BIAS_CONSTANT: f64 = 0.5826;

/// Integration rule for the running-maximum path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    LeftRectangle,
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    /// Time horizon T.
    pub horizon: f64,
    /// Grid resolution n.
    pub steps: u32,
    pub scheme: Scheme,
    pub replications: u64,
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::Domain(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.steps < 2 {
            return Err(Error::Domain(format!("steps must be >= 2, got {}", self.steps)));
        }
        if self.replications < 1 {
            return Err(Error::Domain("replications must be >= 1".into()));
        }
        Ok(())
    }
}

/// Modeled mean defect of the discretized area at horizon T:
/// E Â(T) ≈ E A(T) − β₁·√(T/n)·T.
pub fn discretization_bias(horizon: f64, steps: u32) -> f64 {
    MONITORING_BIAS_CONSTANT * (horizon / steps as f64).sqrt() * horizon
}

/// Area of the running maximum over forced standard-normal increments;
/// the sampling path of [`simulate_area_path`] with the randomness
/// factored out.
pub fn area_from_increments<I>(increments: I, horizon: f64, steps: u32, scheme: Scheme) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let dt = horizon / steps as f64;
    let scale = dt.sqrt();
    let mut b = 0.0f64;
    let mut sup = 0.0f64;
    let mut area = 0.0f64;
    for z in increments.into_iter().take(steps as usize) {
        let prev_sup = sup;
        b += scale * z;
        if b > sup {
            sup = b;
        }
        area += match scheme {
            Scheme::LeftRectangle => prev_sup,
            Scheme::Trapezoid => 0.5 * (prev_sup + sup),
        };
    }
    area * dt
}

/// One sample of Â(T).
pub fn simulate_area_path(stream: &mut RandomStream, cfg: &PathConfig) -> f64 {
    let dt = cfg.horizon / cfg.steps as f64;
    let scale = dt.sqrt();
    let mut b = 0.0f64;
    let mut sup = 0.0f64;
    let mut area = 0.0f64;
    let mut i = 0;
    // consume normals in pairs; one Box–Muller step yields two increments
    while i + 1 < cfg.steps {
        let (z1, z2) = stream.normal_pair();
        let prev = sup;
        b += scale * z1;
        if b > sup {
            sup = b;
        }
        area += match cfg.scheme {
            Scheme::LeftRectangle => prev,
            Scheme::Trapezoid => 0.5 * (prev + sup),
        };
        let prev = sup;
        b += scale * z2;
        if b > sup {
            sup = b;
        }
        area += match cfg.scheme {
            Scheme::LeftRectangle => prev,
            Scheme::Trapezoid => 0.5 * (prev + sup),
        };
        i += 2;
    }
    if i < cfg.steps {
        let z = stream.standard_normal();
        let prev = sup;
        b += scale * z;
        if b > sup {
            sup = b;
        }
        area += match cfg.scheme {
            Scheme::LeftRectangle => prev,
            Scheme::Trapezoid => 0.5 * (prev + sup),
        };
    }
    area * dt
}

/// Streaming estimates of E Âⁿ for n = 0..=max_order in a single pass.
pub fn estimate_moments_mc(
    stream: &RandomStream,
    cfg: &PathConfig,
    max_order: u32,
) -> Result<Vec<McReport>> {
    cfg.validate()?;
    if max_order > 8 {
        return Err(Error::Domain(format!(
            "moment order capped at 8 (relative error of higher powers is impractical), got {max_order}"
        )));
    }
    let k = max_order as usize + 1;
    let stats = run_stats_multi(stream, cfg.replications, k, |s, out| {
        let a = simulate_area_path(s, cfg);
        let mut p = 1.0;
        for slot in out.iter_mut() {
            *slot = p;
            p *= a;
        }
    });
    Ok(stats
        .into_iter()
        .enumerate()
        .map(|(order, st)| {
            McReport::new(
                st.to_estimate(),
                cfg.replications,
                stream.seed(),
                format!("{cfg:?} order={order}"),
            )
        })
        .collect())
}

/// Means of Â(T)/T^(3/2) across horizons; the law of the rescaled area
/// does not depend on T, so all entries estimate the same constant.
pub fn scaling_check(
    stream: &RandomStream,
    cfg: &PathConfig,
    horizons: &[f64],
) -> Result<Vec<McReport>> {
    cfg.validate()?;
    if horizons.len() < 2 {
        return Err(Error::Domain("scaling check needs at least two horizons".into()));
    }
    horizons
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            if !(t > 0.0) {
                return Err(Error::Domain(format!("horizon must be > 0, got {t}")));
            }
            let sub = PathConfig { horizon: t, ..*cfg };
            let norm = t.powf(1.5);
            // one child stream per horizon keeps entries independent
            let base = stream.child(0x5ca1e + i as u64);
            let stats = run_stats(&base, cfg.replications, |s| {
                simulate_area_path(s, &sub) / norm
            });
            Ok(McReport::new(
                stats.to_estimate(),
                cfg.replications,
                stream.seed(),
                format!("{sub:?} normalized=T^-3/2"),
            ))
        })
        .collect()
}
