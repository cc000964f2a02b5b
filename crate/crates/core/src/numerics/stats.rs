//! Streaming statistics and value-with-error bookkeeping.

use serde::{Deserialize, Serialize};

/// What kind of error bound an [`EstimateWithError`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorKind {
    /// Standard error of a Monte Carlo mean.
    StatisticalStderr,
    /// A deterministic quadrature / truncation bound.
    QuadratureBound,
}

/// A value bundled with a non-negative error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithError {
    pub value: f64,
    pub error: f64,
    pub kind: ErrorKind,
}

impl EstimateWithError {
    pub fn statistical(value: f64, stderr: f64) -> Self {
        Self { value, error: stderr.abs(), kind: ErrorKind::StatisticalStderr }
    }

    pub fn quadrature(value: f64, bound: f64) -> Self {
        Self { value, error: bound.abs(), kind: ErrorKind::QuadratureBound }
    }
}

/// Welford-style running mean and variance with exact-count merging, so
/// partial results from parallel workers combine into the statistics of
/// the concatenated sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    sum_sq_dev: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.sum_sq_dev += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        let mean = self.mean + delta * w;
        let sum_sq_dev = self.sum_sq_dev
            + other.sum_sq_dev
            + delta * delta * (self.count as f64 * w);
        Self { count, mean, sum_sq_dev }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero until two samples have arrived.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.sum_sq_dev / (self.count - 1) as f64
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn to_estimate(&self) -> EstimateWithError {
        EstimateWithError::statistical(self.mean, self.stderr())
    }
}

/// Neumaier-compensated accumulator for long alternating sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stats_of(xs: &[f64]) -> RunningStats {
        let mut s = RunningStats::new();
        for &x in xs {
            s.push(x);
        }
        s
    }

    #[test]
    fn matches_two_pass() {
        let xs = [1.5, -0.25, 3.0, 2.25, -1.0, 0.5];
        let s = stats_of(&xs);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((s.mean() - mean).abs() < 1e-14);
        assert!((s.variance() - var).abs() < 1e-14);
    }

    #[test]
    fn merge_equals_concatenation() {
        let a = [0.3, 1.7, -2.0];
        let b = [4.0, 0.0, 1.0, 2.5];
        let merged = stats_of(&a).merge(&stats_of(&b));
        let whole = stats_of(&[&a[..], &b[..]].concat());
        assert_eq!(merged.count(), whole.count());
        assert!((merged.mean() - whole.mean()).abs() < 1e-14);
        assert!((merged.variance() - whole.variance()).abs() < 1e-13);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut c = CompensatedSum::default();
        c.add(1e16);
        c.add(1.0);
        c.add(-1e16);
        assert_eq!(c.value(), 1.0);
    }

    proptest! {
        #[test]
        fn merge_associative(
            a in proptest::collection::vec(-1e3f64..1e3, 1..40),
            b in proptest::collection::vec(-1e3f64..1e3, 1..40),
            c in proptest::collection::vec(-1e3f64..1e3, 1..40),
        ) {
            let (sa, sb, sc) = (stats_of(&a), stats_of(&b), stats_of(&c));
            let left = sa.merge(&sb).merge(&sc);
            let right = sa.merge(&sb.merge(&sc));
            prop_assert_eq!(left.count(), right.count());
            let scale = left.mean().abs().max(1.0);
            prop_assert!((left.mean() - right.mean()).abs() <= 1e-12 * scale);
            let vscale = left.variance().abs().max(1e-30);
            prop_assert!((left.variance() - right.variance()).abs() <= 1e-12 * vscale.max(1.0) * 10.0);
        }
    }
}
