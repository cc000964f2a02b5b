//! Empirical tail probe: ln P(Â > x) from path samples against the
//! quadratic tail rate.

use serde::{Deserialize, Serialize};

use crate::analytic::tail::tail_log_asymptote;
use crate::error::{Error, Result};
use crate::numerics::random::RandomStream;
use crate::simulate::path::{simulate_area_path, PathConfig};
use crate::simulate::run_stats_multi;

/// Minimum exceedance count for a probability estimate to be reported.
pub const MIN_HITS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailProbeRow {
    pub x: f64,
    pub hits: u64,
    pub replications: u64,
    pub p_hat: f64,
    pub p_stderr: f64,
    /// ln P(Â > x); NaN when insufficient.
    pub ln_p: f64,
    pub ln_p_stderr: f64,
    /// −3x²/2.
    pub asymptote: f64,
    /// ln P / asymptote; None at x = 0 or when insufficient.
    pub ratio: Option<f64>,
    /// Set when fewer than [`MIN_HITS`] exceedances arrived; the row is
    /// reported but carries no probability estimate.
    pub insufficient: bool,
}

/// Estimate P(Â > x) for each abscissa from a single set of path
/// replications. Insufficient rows are flagged rather than failing the
/// whole probe.
pub fn tail_probe(
    stream: &RandomStream,
    xs: &[f64],
    cfg: &PathConfig,
) -> Result<Vec<TailProbeRow>> {
    cfg.validate()?;
    if xs.is_empty() {
        return Err(Error::Domain("tail probe needs at least one abscissa".into()));
    }
    for &x in xs {
        if x < 0.0 {
            return Err(Error::Domain(format!("abscissa must be >= 0, got {x}")));
        }
    }
    let k = xs.len();
    // `>=` so x = 0 reports probability one exactly, as the continuum
    // variable does; for x > 0 ties have probability zero.
    let stats = run_stats_multi(stream, cfg.replications, k, |s, out| {
        let a = simulate_area_path(s, cfg);
        for (slot, &x) in out.iter_mut().zip(xs) {
            *slot = if a >= x { 1.0 } else { 0.0 };
        }
    });
    Ok(xs
        .iter()
        .zip(stats)
        .map(|(&x, st)| {
            let p = st.mean();
            let hits = (p * cfg.replications as f64).round() as u64;
            let p_stderr = st.stderr();
            if x == 0.0 {
                return TailProbeRow {
                    x,
                    hits,
                    replications: cfg.replications,
                    p_hat: p,
                    p_stderr,
                    ln_p: p.ln(), // = 0 when every sample exceeds 0
                    ln_p_stderr: 0.0,
                    asymptote: 0.0,
                    ratio: None,
                    insufficient: false,
                };
            }
            let asymptote = tail_log_asymptote(x).expect("x > 0");
            if hits < MIN_HITS {
                return TailProbeRow {
                    x,
                    hits,
                    replications: cfg.replications,
                    p_hat: p,
                    p_stderr,
                    ln_p: f64::NAN,
                    ln_p_stderr: f64::NAN,
                    asymptote,
                    ratio: None,
                    insufficient: true,
                };
            }
            let ln_p = p.ln();
            TailProbeRow {
                x,
                hits,
                replications: cfg.replications,
                p_hat: p,
                p_stderr,
                ln_p,
                ln_p_stderr: p_stderr / p,
                asymptote,
                ratio: Some(ln_p / asymptote),
                insufficient: false,
            }
        })
        .collect())
}
