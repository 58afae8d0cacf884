//! Seeded Monte Carlo for `L(pi)` under the uniform and poissonized laws.
//!
//! Stream contract: samples are grouped into blocks of [`BLOCK`]. Block `b` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` switched to stream `b`, so the merged
//! histogram does not depend on the thread count. Each sample takes its
//! permutation from a Fisher-Yates shuffle of the identity (`i` from `N-1` down
//! to `1`, swap with a uniform index in `0..=i`), bounded integers by Lemire's
//! multiply-and-reject on 32-bit outputs. The poissonized sampler first draws
//! `N ~ Poisson(xi)` from the same stream.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ascent::{AscentPairAlgorithm, Fast, PermutationView};
use crate::error::{check_scale, Error, Result};

/// Samples per independent stream.
pub const BLOCK: u64 = 1024;

/// Largest permutation length drawn.
pub const MAX_SAMPLE_N: u64 = 10_000_000;

/// What a [`SampleRun`] was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Scale {
    Uniform(u64),
    Poissonized(f64),
}

impl Scale {
    /// `N` or `xi` as a real.
    pub fn parameter(&self) -> f64 {
        match *self {
            Scale::Uniform(n) => n as f64,
            Scale::Poissonized(xi) => xi,
        }
    }
}

/// Histogram of `L` over seeded samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRun {
    pub scale: Scale,
    pub num_samples: u64,
    pub seed: u64,
    pub histogram: BTreeMap<u32, u64>,
}

impl SampleRun {
    pub fn mean(&self) -> f64 {
        if self.num_samples == 0 {
            return f64::NAN;
        }
        let s: f64 = self.histogram.iter().map(|(&v, &c)| v as f64 * c as f64).sum();
        s / self.num_samples as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.num_samples < 2 {
            return f64::NAN;
        }
        let m = self.mean();
        let s: f64 = self
            .histogram
            .iter()
            .map(|(&v, &c)| c as f64 * (v as f64 - m).powi(2))
            .sum();
        s / (self.num_samples - 1) as f64
    }

    /// Standard error of [`SampleRun::mean`].
    pub fn standard_error(&self) -> f64 {
        (self.variance() / self.num_samples as f64).sqrt()
    }

    /// `(value - 2 sqrt(2N)) / (2N)^{1/6}` with `N` the scale parameter.
    pub fn scaled(&self, value: u32) -> f64 {
        scale_value(value, self.scale.parameter())
    }

    /// Fraction of samples whose scaled value is strictly below `s`.
    pub fn scaled_ecdf(&self, s: f64) -> f64 {
        let below: u64 = self
            .histogram
            .iter()
            .filter(|(&v, _)| self.scaled(v) < s)
            .map(|(_, &c)| c)
            .sum();
        below as f64 / self.num_samples as f64
    }

    /// `sup_s |ECDF(s) - cdf(s)|` for a continuous `cdf` of the scaled value.
    pub fn kolmogorov_distance(&self, mut cdf: impl FnMut(f64) -> f64) -> f64 {
        let n = self.num_samples as f64;
        let mut cum = 0u64;
        let mut d: f64 = 0.0;
        for (&v, &c) in &self.histogram {
            let f = cdf(self.scaled(v));
            d = d.max((cum as f64 / n - f).abs());
            cum += c;
            d = d.max((cum as f64 / n - f).abs());
        }
        d
    }
}

pub fn scale_value(value: u32, n: f64) -> f64 {
    (value as f64 - 2.0 * (2.0 * n).sqrt()) / (2.0 * n).powf(1.0 / 6.0)
}

/// Uniform integer in `0..range` by Lemire's method, `range >= 1`.
fn bounded_u32<R: Rng>(rng: &mut R, range: u32) -> u32 {
    let mut m = rng.next_u32() as u64 * range as u64;
    if (m as u32) < range {
        let threshold = range.wrapping_neg() % range;
        while (m as u32) < threshold {
            m = rng.next_u32() as u64 * range as u64;
        }
    }
    (m >> 32) as u32
}

/// Uniform permutation of `0..n` written into `buf`.
fn shuffle_into<R: Rng>(rng: &mut R, n: usize, buf: &mut Vec<u32>) {
    buf.clear();
    buf.extend(0..n as u32);
    for i in (1..n).rev() {
        let j = bounded_u32(rng, i as u32 + 1) as usize;
        buf.swap(i, j);
    }
}

/// Uniform permutation of `1..=n` by the Fisher-Yates contract above.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> PermutationView {
    let mut buf = Vec::with_capacity(n);
    shuffle_into(rng, n, &mut buf);
    PermutationView::from_zero_based_unchecked(buf)
}

/// The rng for block `block` of a run.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn run_blocks(
    num_samples: u64,
    seed: u64,
    draw_n: impl Fn(&mut ChaCha8Rng) -> Result<usize> + Sync,
) -> Result<BTreeMap<u32, u64>> {
    let blocks = num_samples.div_ceil(BLOCK);
    let partial: Vec<BTreeMap<u32, u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<_> {
            let mut rng = block_rng(seed, b);
            let count = BLOCK.min(num_samples - b * BLOCK);
            let mut hist = BTreeMap::new();
            let mut buf = Vec::new();
            for _ in 0..count {
                let n = draw_n(&mut rng)?;
                shuffle_into(&mut rng, n, &mut buf);
                let pi = PermutationView::from_zero_based_unchecked(std::mem::take(&mut buf));
                *hist.entry(Fast.compute(&pi)).or_insert(0) += 1;
                buf = pi.into_values();
            }
            Ok(hist)
        })
        .collect::<Result<_>>()?;
    let mut merged = BTreeMap::new();
    for h in partial {
        for (v, c) in h {
            *merged.entry(v).or_insert(0) += c;
        }
    }
    Ok(merged)
}

/// Histogram of `L` over `num_samples` uniform permutations of size `n`.
pub fn mc_scaled_l(n: u64, num_samples: u64, seed: u64) -> Result<SampleRun> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    check_scale("N", n, MAX_SAMPLE_N)?;
    let histogram = run_blocks(num_samples, seed, |_| Ok(n as usize))?;
    Ok(SampleRun {
        scale: Scale::Uniform(n),
        num_samples,
        seed,
        histogram,
    })
}

/// Histogram of `L` over permutations of Poisson(`xi`) size; `L` of the empty one is 0.
pub fn mc_poissonized(xi: f64, num_samples: u64, seed: u64) -> Result<SampleRun> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
    }
    check_scale("xi", xi.ceil() as u64, MAX_SAMPLE_N / 2)?;
    let poisson = Poisson::new(xi).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let histogram = run_blocks(num_samples, seed, |rng| {
        let n = poisson.sample(rng);
        if n > MAX_SAMPLE_N as f64 {
            return Err(Error::ScaleLimit {
                what: "sampled N",
                value: n as u64,
                limit: MAX_SAMPLE_N,
            });
        }
        Ok(n as usize)
    })?;
    Ok(SampleRun {
        scale: Scale::Poissonized(xi),
        num_samples,
        seed,
        histogram,
    })
}
