//! Deterministic parallel replication driver.

use rayon::prelude::*;

use crate::numerics::random::RandomStream;
use crate::numerics::stats::RunningStats;

/// Replications per block. Blocks are the unit of parallelism and of
/// stream derivation; the value is fixed so results do not depend on the
/// worker count.
const BLOCK: u64 = 4096;

/// Run `reps` replications of a scalar-valued experiment and fold them
/// into running statistics. Block `b` draws from `base.child(b)`; block
/// results merge in index order.
pub(crate) fn run_stats<F>(base: &RandomStream, reps: u64, f: F) -> RunningStats
where
    F: Fn(&mut RandomStream) -> f64 + Sync,
{
    let blocks = reps.div_ceil(BLOCK);
    let partials: Vec<RunningStats> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = base.child(b);
            let count = BLOCK.min(reps - b * BLOCK);
            let mut stats = RunningStats::new();
            for _ in 0..count {
                stats.push(f(&mut stream));
            }
            stats
        })
        .collect();
    partials
        .into_iter()
        .fold(RunningStats::new(), |acc, s| acc.merge(&s))
}

/// Same driver for experiments producing `k` values per replication
/// (e.g. successive powers of one sample). The closure fills a reusable
/// buffer.
pub(crate) fn run_stats_multi<F>(
    base: &RandomStream,
    reps: u64,
    k: usize,
    f: F,
) -> Vec<RunningStats>
where
    F: Fn(&mut RandomStream, &mut [f64]) + Sync,
{
    let blocks = reps.div_ceil(BLOCK);
    let partials: Vec<Vec<RunningStats>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = base.child(b);
            let count = BLOCK.min(reps - b * BLOCK);
            let mut stats = vec![RunningStats::new(); k];
            let mut buf = vec![0.0f64; k];
            for _ in 0..count {
                f(&mut stream, &mut buf);
                for (s, v) in stats.iter_mut().zip(&buf) {
                    s.push(*v);
                }
            }
            stats
        })
        .collect();
    partials.into_iter().fold(vec![RunningStats::new(); k], |acc, part| {
        acc.iter().zip(&part).map(|(a, p)| a.merge(p)).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_of_thread_count() {
        let base = RandomStream::new(99, 7);
        let f = |s: &mut RandomStream| s.standard_normal().abs();
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| run_stats(&base, 10_000, f));
        let b = pool4.install(|| run_stats(&base, 10_000, f));
        assert_eq!(a, b);
    }

    #[test]
    fn covers_exact_replication_count() {
        let base = RandomStream::new(1, 0);
        let s = run_stats(&base, BLOCK + 17, |r| r.uniform());
        assert_eq!(s.count(), BLOCK + 17);
    }
}
