//! Conditional transforms of the two pieces of the area up to the first
//! mark, given the local time ζ of the first marked excursion.

use serde::{Deserialize, Serialize};

use crate::analytic::theorem1::DoubleLaplaceParams;
use crate::error::{Error, Result};

/// The two conditional transforms evaluated at a common ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalSplit {
    pub zeta: f64,
    pub lt_a_prime: f64,
    pub lt_a_double_prime: f64,
}

fn check_zeta(zeta: f64) -> Result<()> {
    if !(zeta > 0.0) || !zeta.is_finite() {
        return Err(Error::Domain(format!("zeta must be > 0, got {zeta}")));
    }
    Ok(())
}

/// E[e^(-αA') | ζ] = exp{ √(2λ)·ζ − (2√2/(3α))·((λ+αζ)^(3/2) − λ^(3/2)) }.
///
/// For αζ ≪ λ the two exponent parts cancel to first order, so a short
/// Taylor expansion takes over; the exponent is ≤ 0 either way and the
/// transform lies in (0, 1].
pub fn conditional_lt_a_prime(p: &DoubleLaplaceParams, zeta: f64) -> Result<f64> {
    p.validate()?;
    check_zeta(zeta)?;
    let (alpha, lambda) = (p.alpha, p.lambda);
    let x = alpha * zeta / lambda;
    let exponent = if x < 1e-3 {
        // -(√2/4)·αζ²/√λ · (1 - x/6 + x²/16 - ...)
        let base = -std::f64::consts::SQRT_2 / 4.0 * alpha * zeta * zeta / lambda.sqrt();
        base * (1.0 - x / 6.0 + x * x / 16.0)
    } else {
        (2.0 * lambda).sqrt() * zeta
            - 2.0 * std::f64::consts::SQRT_2 / (3.0 * alpha)
                * ((lambda + alpha * zeta).powf(1.5) - lambda.powf(1.5))
    };
    Ok(exponent.min(0.0).exp())
}

/// E[e^(-αA'') | ζ] = √λ · (λ + αζ)^(-1/2).
pub fn conditional_lt_a_double_prime(p: &DoubleLaplaceParams, zeta: f64) -> Result<f64> {
    p.validate()?;
    check_zeta(zeta)?;
    Ok((p.lambda / (p.lambda + p.alpha * zeta)).sqrt())
}

/// Both conditional transforms at once.
pub fn conditional_split(p: &DoubleLaplaceParams, zeta: f64) -> Result<ConditionalSplit> {
    Ok(ConditionalSplit {
        zeta,
        lt_a_prime: conditional_lt_a_prime(p, zeta)?,
        lt_a_double_prime: conditional_lt_a_double_prime(p, zeta)?,
    })
}
