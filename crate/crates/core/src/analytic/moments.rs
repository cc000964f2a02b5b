//! Integer moments of the area variable and their large-order asymptote.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::gamma::log_gamma;

/// ln(3·√2/4), the per-order geometric factor in the moment formula.
fn ln_c0() -> f64 {
    (3.0 * std::f64::consts::SQRT_2 / 4.0).ln()
}

/// One moment E Aⁿ, carried in both linear and log scale. The log scale
/// is authoritative: Γ(3n/2+1) pushes the linear value past the double
/// range near n ≈ 110, where `value` saturates to infinity while
/// `log_value` stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentResult {
    pub n: u32,
    pub value: f64,
    pub log_value: f64,
}

/// E Aⁿ = n!·Γ(n+2/3) / (Γ(2/3)·Γ(3n/2+1)) · (3√2/4)ⁿ.
pub fn exact_moment(n: u32) -> Result<MomentResult> {
    let nf = n as f64;
    let log_value = log_gamma(nf + 1.0)? + log_gamma(nf + 2.0 / 3.0)?
        - log_gamma(2.0 / 3.0)?
        - log_gamma(1.5 * nf + 1.0)?
        + nf * ln_c0();
    Ok(MomentResult { n, value: log_value.exp(), log_value })
}

/// Large-n asymptote (2√(3π)/(3Γ(2/3))) · n^(1/6) · (n/(3e))^(n/2).
pub fn moment_asymptote(n: u32) -> Result<f64> {
    Ok(moment_asymptote_log(n)?.exp())
}

/// Log of the asymptote; finite and stable down to n = 1.
pub fn moment_asymptote_log(n: u32) -> Result<f64> {
    assert!(n >= 1, "asymptote defined for n >= 1");
    let nf = n as f64;
    let prefactor = (2.0 * (3.0 * std::f64::consts::PI).sqrt()).ln()
        - (3.0f64).ln()
        - log_gamma(2.0 / 3.0)?;
    Ok(prefactor + nf.ln() / 6.0 + 0.5 * nf * (nf.ln() - (3.0 * std::f64::consts::E).ln()))
}
