//! Reproducible Monte Carlo driver.
//!
//! Sample `i` always draws from its own ChaCha8 stream `(master_seed, i)`,
//! samples are grouped in fixed batches and the batch totals are combined by
//! pairwise summation in index order. The result is therefore the same bit
//! pattern for any number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 99% standard normal quantile.
pub const Z99: f64 = 2.575_829_303_548_900_4;

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "SHC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: u64,
    pub master_seed: u64,
    pub batch: u64,
}

impl McConfig {
    pub fn new(n_samples: u64, master_seed: u64) -> Result<Self> {
        Self::with_batch(n_samples, master_seed, 4096)
    }

    pub fn with_batch(n_samples: u64, master_seed: u64, batch: u64) -> Result<Self> {
        if n_samples == 0 || batch == 0 {
            return Err(Error::Domain("n_samples and batch must be >= 1".into()));
        }
        Ok(McConfig { n_samples, master_seed, batch })
    }
}

/// Sample mean with its standard error and a normal 99% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: u64,
}

impl McEstimate {
    fn from_moments(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        let std_error = (var / nf).sqrt();
        McEstimate {
            mean,
            std_error,
            ci_low: mean - Z99 * std_error,
            ci_high: mean + Z99 * std_error,
            n_samples: n,
        }
    }

    /// Multiplies the underlying samples by `c`.
    pub fn scaled(self, c: f64) -> Self {
        let (lo, hi) = (c * self.ci_low, c * self.ci_high);
        McEstimate {
            mean: c * self.mean,
            std_error: c.abs() * self.std_error,
            ci_low: lo.min(hi),
            ci_high: lo.max(hi),
            n_samples: self.n_samples,
        }
    }
}

/// Random stream of sample `index` under `master_seed`.
pub fn sample_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Worker count from [`THREADS_ENV`], falling back to the available
/// parallelism.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` with Monte Carlo work spread over `workers` threads.
#[cfg(feature = "parallel")]
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<T: Send>(_workers: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

/// Order-preserving map over `items`, in parallel when available.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|x| f(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn pairwise(parts: &[Vec<f64>]) -> Vec<f64> {
    match parts.len() {
        0 => Vec::new(),
        1 => parts[0].clone(),
        n => {
            let (l, r) = parts.split_at(n / 2);
            let (a, b) = (pairwise(l), pairwise(r));
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        }
    }
}

/// Estimates the means of `width` jointly simulated quantities.
///
/// `draw(rng, out)` writes one realisation of every quantity into `out`.
pub fn estimate<F>(cfg: &McConfig, width: usize, draw: F) -> Vec<McEstimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let n_batches = cfg.n_samples.div_ceil(cfg.batch);
    let run_batch = |b: u64| {
        let mut acc = vec![0.0; 2 * width];
        let mut out = vec![0.0; width];
        let start = b * cfg.batch;
        let end = (start + cfg.batch).min(cfg.n_samples);
        for i in start..end {
            let mut rng = sample_rng(cfg.master_seed, i);
            draw(&mut rng, &mut out);
            for (k, v) in out.iter().enumerate() {
                acc[2 * k] += v;
                acc[2 * k + 1] += v * v;
            }
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n_batches).into_par_iter().map(run_batch).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<f64>> = (0..n_batches).map(run_batch).collect();

    let total = pairwise(&parts);
    (0..width)
        .map(|k| McEstimate::from_moments(total[2 * k], total[2 * k + 1], cfg.n_samples))
        .collect()
}

/// Single-quantity form of [`estimate`].
pub fn estimate_mean<F>(cfg: &McConfig, draw: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    estimate(cfg, 1, |rng, out| out[0] = draw(rng))[0]
}
