//! Seeded, chunked Monte Carlo.
//!
//! Draws are split into fixed-size chunks; chunk `i` uses a ChaCha8 stream
//! `i` under the caller's seed. Chunks may run on any thread, and results are
//! reduced in chunk order, so output depends only on `(seed, n)`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const CHUNK: usize = 1 << 16;

/// Sample mean with its CLT standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub mean: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub standard_error: f64,
    pub n: usize,
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunk_bounds(n: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(move |i| (i as u64, CHUNK.min(n - i * CHUNK)))
}

/// `n` independent draws of `f`, in a fixed order.
pub fn draw<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut dyn RngCore) -> T + Sync,
{
    let parts: Vec<Vec<T>> = chunk_bounds(n)
        .map(|(i, len)| {
            let mut rng = chunk_rng(seed, i);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[derive(Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Mean of `n` draws of `f` with standard error.
pub fn estimate_mean<F>(n: usize, seed: u64, f: F) -> Estimate
where
    F: Fn(&mut dyn RngCore) -> f64 + Sync,
{
    let parts: Vec<Welford> = chunk_bounds(n)
        .map(|(i, len)| {
            let mut rng = chunk_rng(seed, i);
            let mut acc = Welford::default();
            for _ in 0..len {
                acc.push(f(&mut rng));
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(Welford::default(), Welford::merge);
    Estimate {
        mean: total.mean,
        standard_error: if total.n > 1.0 {
            (total.m2.max(0.0) / (total.n - 1.0) / total.n).sqrt()
        } else {
            0.0
        },
        n,
    }
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let f = |r: &mut dyn RngCore| r.random::<f64>();
        let a = estimate_mean(200_000, 9, f);
        let b = estimate_mean(200_000, 9, f);
        assert_eq!(a, b);
        let c = estimate_mean(200_000, 10, f);
        assert_ne!(a.mean, c.mean);
        assert!((a.mean - 0.5).abs() < 4.0 * a.standard_error);
        let expected_se = (1.0f64 / 12.0 / 200_000.0).sqrt();
        assert!((a.standard_error / expected_se - 1.0).abs() < 0.02);
    }

    #[test]
    fn constant_has_zero_error() {
        let e = estimate_mean(1000, 0, |_| 3.0);
        assert_eq!((e.mean, e.standard_error), (3.0, 0.0));
    }

    #[test]
    fn draw_matches_estimate_order() {
        let xs = draw(70_000, 3, |r| r.random::<f64>());
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let e = estimate_mean(70_000, 3, |r| r.random::<f64>());
        assert!((mean - e.mean).abs() < 1e-12);
    }
}
