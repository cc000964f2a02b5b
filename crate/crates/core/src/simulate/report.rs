use serde::{Deserialize, Serialize};

use crate::numerics::stats::EstimateWithError;

/// A Monte Carlo result together with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: EstimateWithError,
    pub replications: u64,
    pub seed: u64,
    /// Opaque echo of the full input configuration.
    pub wall_config: String,
}

impl McReport {
    pub fn new(
        estimate: EstimateWithError,
        replications: u64,
        seed: u64,
        wall_config: impl Into<String>,
    ) -> Self {
        Self { estimate, replications, seed, wall_config: wall_config.into() }
    }

    /// Signed distance to a reference value in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        if self.estimate.error == 0.0 {
            if self.estimate.value == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.estimate.value - reference) / self.estimate.error
        }
    }
}
