//! Sampling of `log q_min(x, δ) + ½ log δ` and comparison with the limit law.
//!
//! Random work is split into fixed blocks of [`BLOCK`] items, block `b`
//! drawing from the ChaCha8 stream `b` of the run seed. Shards only decide
//! which thread evaluates which block, so a batch is bit-identical for every
//! shard count.

use num_bigint::BigInt;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit_law::LimitCdf;
use crate::rational_core::{bigint_ln, q_min, Rational};
use crate::stats::{ks_statistic, Estimate};

/// Items drawn per RNG stream.
pub const BLOCK: usize = 1024;

/// Worker cap from `QMIN_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("QMIN_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Default shard count: available cores, limited by `QMIN_THREADS`.
pub fn default_shards() -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    thread_cap().map_or(cores, |cap| cores.min(cap))
}

pub(crate) fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Evaluates `work(block_index, range)` over blocks of `0..n` on `shards`
/// workers and concatenates the results in block order.
pub(crate) fn run_blocks<T, F>(n: usize, shards: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, std::ops::Range<usize>) -> Result<Vec<T>> + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let job = || {
        (0..blocks)
            .into_par_iter()
            .map(|b| work(b as u64, b * BLOCK..((b + 1) * BLOCK).min(n)))
            .collect::<Result<Vec<Vec<T>>>>()
    };
    let threads = thread_cap().map_or(shards, |cap| shards.min(cap)).max(1);
    let parts = if threads == 1 {
        (0..blocks)
            .map(|b| work(b as u64, b * BLOCK..((b + 1) * BLOCK).min(n)))
            .collect::<Result<Vec<_>>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(job)?
    };
    Ok(parts.into_iter().flatten().collect())
}

/// A uniform point of `[0, 1)` with 128 random bits.
pub fn random_dyadic<R: Rng>(rng: &mut R) -> Rational {
    Rational::from_dyadic_u128(rng.random::<u128>())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SamplingMode {
    /// `x` uniform on `[0, 1)`.
    Continuous,
    /// `x = x0 + j / grid_n` for `j = 1..=grid_n`.
    Grid {
        grid_n: u64,
        #[serde(serialize_with = "crate::cli::ser_display")]
        x0: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub delta: Rational,
    pub mode: SamplingMode,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub shards: usize,
}

impl SampleConfig {
    pub fn continuous(delta: Rational, n_samples: usize, seed: u64) -> Self {
        SampleConfig {
            delta,
            mode: SamplingMode::Continuous,
            n_samples,
            seed,
            shards: default_shards(),
        }
    }

    /// The full grid `x0 + j/N`, `j = 1..=N`.
    pub fn grid(delta: Rational, grid_n: u64, x0: Rational) -> Self {
        SampleConfig {
            delta,
            mode: SamplingMode::Grid { grid_n, x0 },
            n_samples: grid_n as usize,
            seed: 0,
            shards: default_shards(),
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_positive() {
            return Err(Error::NonPositiveDelta(self.delta.to_string()));
        }
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.shards == 0 {
            return Err(Error::Config("shards must be at least 1".into()));
        }
        if let SamplingMode::Grid { grid_n, .. } = &self.mode {
            if *grid_n == 0 {
                return Err(Error::Config("grid N must be at least 1".into()));
            }
            if Rational::from_integer(*grid_n) * &self.delta < Rational::one() {
                return Err(Error::Config(format!(
                    "grid N = {grid_n} is below 1/delta = {}",
                    self.delta.recip()
                )));
            }
            if self.n_samples as u64 > *grid_n {
                return Err(Error::Config(format!(
                    "n_samples = {} exceeds the {grid_n} grid points",
                    self.n_samples
                )));
            }
        }
        Ok(())
    }
}

/// Scaled log-denominators for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub config: SampleConfig,
    pub values: Vec<f64>,
}

fn scaled_log(x: &Rational, delta: &Rational, half_log_delta: f64) -> Result<f64> {
    let q: BigInt = q_min(x, delta)?.q;
    Ok(bigint_ln(&q) + half_log_delta)
}

/// Draws the batch described by `config`.
pub fn sample(config: &SampleConfig) -> Result<SampleBatch> {
    config.validate()?;
    let delta = &config.delta;
    let half_log_delta = 0.5 * delta.ln();
    let values = match &config.mode {
        SamplingMode::Continuous => run_blocks(config.n_samples, config.shards, |b, range| {
            let mut rng = block_rng(config.seed, b);
            range
                .map(|_| scaled_log(&random_dyadic(&mut rng), delta, half_log_delta))
                .collect()
        })?,
        SamplingMode::Grid { grid_n, x0 } => {
            let n = *grid_n as usize;
            let indices: Vec<usize> = if config.n_samples == n {
                (1..=n).collect()
            } else {
                let mut rng = block_rng(config.seed, u64::MAX);
                let mut picked: Vec<usize> = index::sample(&mut rng, n, config.n_samples)
                    .into_iter()
                    .map(|i| i + 1)
                    .collect();
                picked.sort_unstable();
                picked
            };
            let step = Rational::new(1, *grid_n)?;
            run_blocks(indices.len(), config.shards, |_, range| {
                range
                    .map(|i| {
                        let x = x0 + &(&step * &Rational::from_integer(indices[i] as u64));
                        scaled_log(&x, delta, half_log_delta)
                    })
                    .collect()
            })?
        }
    };
    Ok(SampleBatch {
        config: config.clone(),
        values,
    })
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Mean of `value^n` over the batch.
pub fn empirical_log_moment(batch: &SampleBatch, n: u32) -> Result<f64> {
    Ok(log_moment_estimate(batch, n)?.mean)
}

/// Mean of `value^n` with its standard error.
pub fn log_moment_estimate(batch: &SampleBatch, n: u32) -> Result<Estimate> {
    Estimate::of(batch.values.iter().map(|v| v.powi(n as i32)))
}

/// Kolmogorov–Smirnov distance between the batch and the limit law.
pub fn ks_distance(batch: &SampleBatch) -> Result<f64> {
    let cdf = LimitCdf::global();
    ks_statistic(&batch.values, |s| cdf.cdf(s))
}

/// Fraction of values `<= 0`, with its standard error.
pub fn nonpositive_fraction(batch: &SampleBatch) -> Result<Estimate> {
    Estimate::of(batch.values.iter().map(|&v| if v <= 0.0 { 1.0 } else { 0.0 }))
}

/// Empirical mean and spread in the resonance-order convention (base-10
/// logs, intervals of length `2δ`), valid for a batch drawn at length `2δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceConvention {
    pub mu1: f64,
    pub mu1_stderr: f64,
    pub sigma: f64,
    pub sigma_stderr: f64,
}

pub fn resonance_convention(batch: &SampleBatch) -> Result<ResonanceConvention> {
    let mean = log_moment_estimate(batch, 1)?;
    let n = batch.len() as f64;
    if batch.len() < 2 {
        return Err(Error::EmptyBatch);
    }
    let m = mean.mean;
    let m2 = batch.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = batch.values.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    let sigma = (m2 * n / (n - 1.0)).sqrt();
    // Delta method: Var(s^2) ~ (m4 - m2^2) / n.
    let sigma_stderr = ((m4 - m2 * m2) / n).sqrt() / (2.0 * sigma);
    let ln10 = std::f64::consts::LN_10;
    Ok(ResonanceConvention {
        mu1: (m - 0.5 * std::f64::consts::LN_2) / ln10,
        mu1_stderr: mean.stderr / ln10,
        sigma: sigma / ln10,
        sigma_stderr: sigma_stderr / ln10,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    pub total: u64,
}

impl Histogram {
    /// `count / (total * width)` for bin `i`.
    pub fn density(&self, i: usize) -> f64 {
        let width = self.bin_edges[i + 1] - self.bin_edges[i];
        self.counts[i] as f64 / (self.total as f64 * width)
    }

    /// Rows `(bin_lo, bin_hi, count, density)`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, u64, f64)> + '_ {
        (0..self.counts.len())
            .map(|i| (self.bin_edges[i], self.bin_edges[i + 1], self.counts[i], self.density(i)))
    }

    /// Index of the fullest bin.
    pub fn mode_bin(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }
}

/// Uniform bins on `[lo, hi)`; values outside land in `underflow`/`overflow`.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain("histogram", format!("need finite lo < hi, got [{lo}, {hi})")));
    }
    if bins == 0 {
        return Err(Error::domain("histogram", "bins must be at least 1"));
    }
    let width = (hi - lo) / bins as f64;
    let bin_edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let mut counts = vec![0u64; bins];
    let (mut underflow, mut overflow) = (0, 0);
    for &v in values {
        if v < lo {
            underflow += 1;
        } else if v >= hi {
            overflow += 1;
        } else {
            // Rounding can push the computed index one bin off; settle it
            // against the stored edges.
            let mut i = (((v - lo) / width) as usize).min(bins - 1);
            if v < bin_edges[i] {
                i -= 1;
            } else if i + 1 < bins && v >= bin_edges[i + 1] {
                i += 1;
            }
            counts[i] += 1;
        }
    }
    Ok(Histogram {
        bin_edges,
        counts,
        underflow,
        overflow,
        total: values.len() as u64,
    })
}

/// Histogram of a batch's values.
pub fn batch_histogram(batch: &SampleBatch, lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    histogram(&batch.values, lo, hi, bins)
}

/// Draws `n` values from the limit law by inverse-CDF sampling.
pub fn sample_limit_law(n: usize, seed: u64, shards: usize) -> Result<Vec<f64>> {
    let cdf = LimitCdf::global();
    run_blocks(n, shards, |b, range| {
        let mut rng = block_rng(seed, b);
        Ok(range.map(|_| cdf.quantile(rng.random::<f64>())).collect())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit_law::MODE;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SampleConfig::continuous(r("0"), 10, 1).validate().is_err());
        assert!(SampleConfig::continuous(r("1/10"), 0, 1).validate().is_err());
        assert!(SampleConfig::continuous(r("1/10"), 10, 1).with_shards(0).validate().is_err());
        assert!(SampleConfig::grid(r("1/3000"), 2999, r("0")).validate().is_err());
        assert!(SampleConfig::grid(r("1/3000"), 3000, r("0")).validate().is_ok());
        let mut c = SampleConfig::grid(r("1/10"), 10, r("0"));
        c.n_samples = 11;
        assert!(c.validate().is_err());
    }

    #[test]
    fn unit_length_gives_zero() {
        let batch = sample(&SampleConfig::continuous(r("1"), 500, 3)).unwrap();
        assert!(batch.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn deterministic_across_shards() {
        let base = SampleConfig::continuous(r("1e-6"), 3 * BLOCK + 17, 42);
        let a = sample(&base.clone().with_shards(1)).unwrap();
        let b = sample(&base.clone().with_shards(4)).unwrap();
        let c = sample(&base.with_shards(3)).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.values, c.values);
        let other = sample(&SampleConfig::continuous(r("1e-6"), 3 * BLOCK + 17, 43)).unwrap();
        assert_ne!(a.values, other.values);
    }

    #[test]
    fn grid_population_and_subsample() {
        let full = sample(&SampleConfig::grid(r("1/3000"), 3000, r("0"))).unwrap();
        assert_eq!(full.len(), 3000);
        // x = 1 is the last grid point; its interval holds the integer 1.
        assert!((full.values.last().unwrap() + 0.5 * 3000f64.ln()).abs() < 1e-15);
        let mut cfg = SampleConfig::grid(r("1/3000"), 3000, r("0"));
        cfg.n_samples = 100;
        cfg.seed = 9;
        let sub = sample(&cfg).unwrap();
        assert_eq!(sub.len(), 100);
        assert_eq!(sub.values, sample(&cfg.clone().with_shards(5)).unwrap().values);
        for v in &sub.values {
            assert!(full.values.contains(v));
        }
    }

    #[test]
    fn moments_and_statistics() {
        let batch = sample(&SampleConfig::continuous(r("1e-8"), 20_000, 5)).unwrap();
        assert_eq!(empirical_log_moment(&batch, 0).unwrap(), 1.0);
        let m1 = log_moment_estimate(&batch, 1).unwrap();
        assert!(m1.covers(crate::moments::mu(1), 4.0), "{m1:?}");
        let below = nonpositive_fraction(&batch).unwrap();
        assert!(below.covers(3.0 / std::f64::consts::PI.powi(2), 4.0), "{below:?}");
        assert!(ks_distance(&batch).unwrap() < 0.03);
        let hist = batch_histogram(&batch, -3.0, 4.0, 28).unwrap();
        let mode = hist.mode_bin();
        assert!(hist.bin_edges[mode] <= MODE + 0.25 && MODE - 0.25 <= hist.bin_edges[mode + 1]);
    }

    #[test]
    fn histogram_edges() {
        let h = histogram(&[0.5, 0.5, 0.5], 0.0, 1.0, 1).unwrap();
        assert_eq!(h.counts, vec![3]);
        assert_eq!(h.density(0), 1.0);
        let h = histogram(&[5.0, -5.0, 7.0], 0.0, 1.0, 4).unwrap();
        assert_eq!(h.counts, vec![0; 4]);
        assert_eq!((h.underflow, h.overflow, h.total), (1, 2, 3));
        let h = histogram(&[0.0, 0.1, 0.2, 0.3, 1.0 - 1e-17], 0.0, 1.0, 10).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>() + h.overflow, 5);
        assert!(histogram(&[1.0], 1.0, 1.0, 3).is_err());
        assert!(histogram(&[1.0], 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn limit_law_sampler_passes_ks() {
        let n = 20_000;
        let draws = sample_limit_law(n, 11, 2).unwrap();
        let cdf = LimitCdf::global();
        let d = ks_statistic(&draws, |s| cdf.cdf(s)).unwrap();
        assert!(d < crate::stats::ks_critical_99(n), "{d}");
    }
}
