//! Reproducible Monte Carlo plumbing.
//!
//! Every estimator draws from ChaCha8 keyed by `(seed, stream)`. A run of `n`
//! samples is cut into fixed-size chunks and chunk `i` always uses stream `i`,
//! so results are bit-identical for a given `(seed, n)` whatever the thread
//! count. Chunk partial results are merged in chunk order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per chunk.
pub const CHUNK_SIZE: u64 = 1 << 15;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `per_chunk(rng, count)` over `ceil(n / CHUNK_SIZE)` chunks in
/// parallel and returns the partial results in chunk order.
pub fn map_chunks<T, F>(seed: u64, n: u64, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let count = CHUNK_SIZE.min(n - i * CHUNK_SIZE);
            let mut rng = stream_rng(seed, i);
            per_chunk(&mut rng, count)
        })
        .collect()
}

/// Mergeable running mean and variance (Welford / Chan).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    pub fn merged<'a>(parts: impl IntoIterator<Item = &'a RunningStats>) -> RunningStats {
        let mut total = RunningStats::default();
        for p in parts {
            total.merge(p);
        }
        total
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl McEstimate {
    /// `|estimate - target| <= k · stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.estimate - target).abs() <= k * self.stderr
    }
}

impl From<RunningStats> for McEstimate {
    fn from(s: RunningStats) -> Self {
        Self {
            estimate: s.mean,
            stderr: s.stderr(),
            samples: s.count,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunked_runs_are_reproducible_and_thread_independent() {
        let run = || {
            let parts = map_chunks(7, 100_000, |rng, count| {
                let mut s = RunningStats::default();
                for _ in 0..count {
                    s.push(rng.random::<f64>());
                }
                s
            });
            RunningStats::merged(&parts)
        };
        let a = run();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(a, b);
        assert_eq!(a.count, 100_000);
        assert!((a.mean - 0.5).abs() < 4.0 * a.stderr());
    }

    #[test]
    fn streams_differ() {
        let x: u64 = stream_rng(1, 0).random();
        let y: u64 = stream_rng(1, 1).random();
        let z: u64 = stream_rng(2, 0).random();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut all = RunningStats::default();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = RunningStats::default();
        let mut b = RunningStats::default();
        xs[..333].iter().for_each(|&x| a.push(x));
        xs[333..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.count, all.count);
        assert!((a.mean - all.mean).abs() < 1e-12);
        assert!((a.variance() - all.variance()).abs() < 1e-10);
    }
}
