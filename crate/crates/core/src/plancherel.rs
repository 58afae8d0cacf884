//! Shifted Plancherel measure, its poissonization, and the law of `lambda_1`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{check_scale, Error, Result};
use crate::partition::{enumerate_strict, g_formula, ln_factorial, ln_g, StrictPartition};
use crate::scalar::Rational;

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `P_N(lambda) = 2^{N - l(lambda)} (g^lambda)^2 / N!`.
pub fn p_spl(lambda: &StrictPartition, n: u32) -> Result<Rational> {
    if lambda.size() != n {
        return Err(Error::InvalidArgument(format!(
            "|{lambda}| = {} but N = {n}",
            lambda.size()
        )));
    }
    let g = g_formula(lambda)?;
    let num = (BigUint::one() << (n as usize - lambda.length())) * &g * &g;
    Ok(Rational::new(BigInt::from(num), BigInt::from(factorial(n))))
}

/// `e^{-xi} xi^|lambda| 2^{|lambda| - l(lambda)} (g^lambda / |lambda|!)^2`.
pub fn p_psp(lambda: &StrictPartition, xi: f64) -> f64 {
    ln_p_psp(lambda, xi, ln_factorial(lambda.size())).exp()
}

fn ln_p_psp(lambda: &StrictPartition, xi: f64, ln_fact: f64) -> f64 {
    let n = lambda.size() as f64;
    let mut v = -xi + 2.0 * (ln_g(lambda) - ln_fact);
    if lambda.size() > 0 {
        v += n * xi.ln() + (n - lambda.length() as f64) * std::f64::consts::LN_2;
    }
    v
}

/// Largest `N` for [`exact_lambda1_distribution`].
pub const EXACT_LAMBDA1_LIMIT: u32 = 40;

/// `h -> P_N(lambda_1 = h)` as exact rationals.
pub fn exact_lambda1_distribution(n: u32) -> Result<BTreeMap<u32, Rational>> {
    check_scale("N", n as u64, EXACT_LAMBDA1_LIMIT as u64)?;
    let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
    for lambda in enumerate_strict(n) {
        let p = p_spl(&lambda, n)?;
        *out.entry(lambda.first()).or_insert_with(Rational::zero) += p;
    }
    Ok(out)
}

/// `lambda_1` law of the poissonized measure, restricted to `|lambda| <= max_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonizedLaw {
    pub xi: f64,
    pub max_size: u32,
    /// `h -> P(lambda_1 = h, |lambda| <= max_size)`.
    pub probabilities: BTreeMap<u32, f64>,
    /// `P(|lambda| > max_size)`, bounded above.
    pub tail: f64,
}

impl PoissonizedLaw {
    /// `sum_h h P(lambda_1 = h)` over the retained mass.
    pub fn truncated_mean(&self) -> f64 {
        self.probabilities.iter().map(|(&h, &p)| h as f64 * p).sum()
    }

    /// Upper bound on the mean contributed by `|lambda| > max_size`:
    /// `lambda_1 <= |lambda|`, so it is at most `E[N; N > max_size]` for `N ~ Poisson(xi)`.
    pub fn mean_tail(&self) -> f64 {
        poisson_tail(self.xi, self.max_size, 1)
    }
}

/// `sum_{n > m} n^power e^{-xi} xi^n / n!` for `power` in `{0, 1}`.
fn poisson_tail(xi: f64, m: u32, power: u32) -> f64 {
    let mut n = m as f64 + 1.0;
    let mut ln_term = -xi + n * xi.ln() - ln_factorial(m + 1);
    let mut sum = 0.0;
    loop {
        let term = n.powi(power as i32) * ln_term.exp();
        // later term ratios are smaller still
        let ratio = xi / (n + 1.0) * ((n + 1.0) / n).powi(power as i32);
        if ratio < 0.5 {
            return crate::series::inflate(sum + term * ratio / (1.0 - ratio) + term);
        }
        sum += term;
        ln_term += xi.ln() - (n + 1.0).ln();
        n += 1.0;
        if n > 1e7 {
            return f64::INFINITY;
        }
    }
}

/// Largest `max_size` accepted by [`poissonized_lambda1_law`].
pub const POISSONIZED_SIZE_LIMIT: u32 = 100;

/// Exact `lambda_1` law of the poissonized measure over `|lambda| <= max_size`.
pub fn poissonized_lambda1_law(xi: f64, max_size: u32) -> Result<PoissonizedLaw> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
    }
    check_scale("max |lambda|", max_size as u64, POISSONIZED_SIZE_LIMIT as u64)?;
    let mut probabilities = BTreeMap::new();
    for n in 0..=max_size {
        let lf = ln_factorial(n);
        for lambda in enumerate_strict(n) {
            *probabilities.entry(lambda.first()).or_insert(0.0) += ln_p_psp(&lambda, xi, lf).exp();
        }
    }
    Ok(PoissonizedLaw {
        xi,
        max_size,
        probabilities,
        tail: poisson_tail(xi, max_size, 0),
    })
}
