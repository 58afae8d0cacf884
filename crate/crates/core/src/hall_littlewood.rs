//! Hall-Littlewood polynomials in a few variables and the size moments of the
//! Hall-Littlewood measure.
//!
//! `P_lambda(x; t)` is the symmetrization
//! `(1/v_lambda(t)) sum_w w(x^lambda prod_{i<j} (x_i - t x_j)/(x_i - x_j))`.
//! Antisymmetrizing the numerator leaves `sum_mu c_mu(t) s_mu(x)` with
//! `c_mu in Z[t]`; the division by `v_lambda(t)` is done on those integer
//! polynomials before `t` is substituted, which also covers the roots of
//! `v_lambda` such as `t = -1`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{check_scale, Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::scalar::{Rational, Scalar};
use crate::series::geometric_tail_bound;

/// Most variables accepted by [`hl_p`].
pub const MAX_HL_VARS: usize = 4;

/// Integer polynomial in `t`, lowest degree first.
type TPoly = Vec<i128>;

fn tpoly_trim(mut p: TPoly) -> TPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn tpoly_mul(a: &[i128], b: &[i128]) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    tpoly_trim(out)
}

/// Exact quotient `a / d` for `d` with constant term 1.
fn tpoly_div_exact(a: &[i128], d: &[i128]) -> Result<TPoly> {
    debug_assert_eq!(d.first(), Some(&1));
    let mut rem = a.to_vec();
    if rem.is_empty() {
        return Ok(Vec::new());
    }
    let qlen = match rem.len().checked_sub(d.len() - 1) {
        Some(n) => n,
        None => return Err(Error::NonInteger(format!("{a:?} is not divisible by {d:?}"))),
    };
    let mut q = vec![0i128; qlen];
    for i in 0..qlen {
        let c = rem[i];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in d.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(Error::NonInteger(format!("{a:?} is not divisible by {d:?}")));
    }
    Ok(tpoly_trim(q))
}

fn tpoly_eval<S: Scalar>(p: &[i128], t: &S) -> S {
    p.iter()
        .rev()
        .fold(S::zero(), |acc, &c| acc * t.clone() + S::from_i64(c as i64))
}

/// `[m]_t! = prod_{j=1}^m (1 + t + ... + t^{j-1})`.
fn t_factorial(m: usize) -> TPoly {
    (1..=m).fold(vec![1], |acc, j| tpoly_mul(&acc, &vec![1; j]))
}

/// `v_lambda(t)` over `n` entries, zero parts included.
fn v_lambda(lambda: &Partition, n: usize) -> TPoly {
    let mut v = t_factorial(n - lambda.length());
    for (_, m) in lambda.multiplicities() {
        v = tpoly_mul(&v, &t_factorial(m));
    }
    v
}

/// `c_mu(t) / v_lambda(t)`, keyed by `mu` padded to `n` entries.
fn schur_expansion(lambda: &Partition, n: usize) -> Result<BTreeMap<Vec<u32>, TPoly>> {
    let mut exps: Vec<u32> = lambda.parts().to_vec();
    exps.resize(n, 0);
    // expand x^lambda prod_{i<j} (x_i - t x_j): monomial exponent -> t-polynomial
    let mut terms: BTreeMap<Vec<u32>, TPoly> = BTreeMap::from([(exps, vec![1])]);
    for i in 0..n {
        for j in i + 1..n {
            let mut next: BTreeMap<Vec<u32>, TPoly> = BTreeMap::new();
            for (e, c) in terms {
                let mut a = e.clone();
                a[i] += 1;
                let sum = next.entry(a).or_default();
                add_into(sum, &c, 0, 1);
                let mut b = e;
                b[j] += 1;
                let sum = next.entry(b).or_default();
                add_into(sum, &c, 1, -1);
            }
            terms = next;
        }
    }
    // coefficient of the strictly decreasing exponent beta = mu + delta
    let mut alt: BTreeMap<Vec<u32>, TPoly> = BTreeMap::new();
    for (e, c) in terms {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| e[b].cmp(&e[a]));
        let sorted: Vec<u32> = idx.iter().map(|&k| e[k]).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let sign = if permutation_parity(&idx) { -1 } else { 1 };
        let mu: Vec<u32> = sorted
            .iter()
            .enumerate()
            .map(|(k, &b)| b - (n - 1 - k) as u32)
            .collect();
        add_into(alt.entry(mu).or_default(), &c, 0, sign);
    }
    let v = v_lambda(lambda, n);
    let mut out = BTreeMap::new();
    for (mu, c) in alt {
        let c = tpoly_trim(c);
        if c.is_empty() {
            continue;
        }
        out.insert(mu, tpoly_div_exact(&c, &v)?);
    }
    Ok(out)
}

/// `acc += sign * t^shift * c`.
fn add_into(acc: &mut TPoly, c: &[i128], shift: usize, sign: i128) {
    if acc.len() < c.len() + shift {
        acc.resize(c.len() + shift, 0);
    }
    for (k, &x) in c.iter().enumerate() {
        acc[k + shift] += sign * x;
    }
}

/// Whether the permutation is odd.
fn permutation_parity(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for s in 0..p.len() {
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// `h_0, ..., h_max` of the variables.
fn complete_homogeneous<S: Scalar>(xs: &[S], max: usize) -> Vec<S> {
    let mut h = vec![S::zero(); max + 1];
    h[0] = S::one();
    for x in xs {
        for k in 1..=max {
            let prev = h[k - 1].clone();
            h[k] = h[k].clone() + x.clone() * prev;
        }
    }
    h
}

fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    match m.len() {
        0 => S::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = S::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<S>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = m[0][c].clone() * det(&minor);
                acc = if c % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Schur function `s_mu` by the Jacobi-Trudi determinant.
pub fn schur_s<S: Scalar>(mu: &[u32], xs: &[S]) -> S {
    let mu: Vec<u32> = mu.iter().copied().filter(|&p| p > 0).collect();
    let l = mu.len();
    if l > xs.len() {
        return S::zero();
    }
    let max = mu.first().copied().unwrap_or(0) as usize + l;
    let h = complete_homogeneous(xs, max);
    let m: Vec<Vec<S>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let k = mu[i] as i64 - i as i64 + j as i64;
                    if k < 0 {
                        S::zero()
                    } else {
                        h[k as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    det(&m)
}

fn check_vars(lambda: &Partition, n: usize) -> Result<()> {
    check_scale("variables", n as u64, MAX_HL_VARS as u64)?;
    if lambda.length() > n {
        return Err(Error::InvalidArgument(format!(
            "{lambda} has more parts than the {n} variables"
        )));
    }
    Ok(())
}

/// Hall-Littlewood `P_lambda(xs; t)`.
pub fn hl_p<S: Scalar>(lambda: &Partition, xs: &[S], t: &S) -> Result<S> {
    let n = xs.len();
    check_vars(lambda, n)?;
    let mut acc = S::zero();
    for (mu, c) in schur_expansion(lambda, n)? {
        acc = acc + tpoly_eval(&c, t) * schur_s(&mu, xs);
    }
    Ok(acc)
}

/// `b_lambda(t) = prod_i prod_{j=1}^{m_i} (1 - t^j)`.
pub fn b_lambda<S: Scalar>(lambda: &Partition, t: &S) -> S {
    let mut acc = S::one();
    for (_, m) in lambda.multiplicities() {
        for j in 1..=m as u32 {
            acc = acc * (S::one() - t.powi(j));
        }
    }
    acc
}

/// Hall-Littlewood `Q_lambda(xs; t) = b_lambda(t) P_lambda(xs; t)`.
pub fn hl_q<S: Scalar>(lambda: &Partition, xs: &[S], t: &S) -> Result<S> {
    Ok(b_lambda(lambda, t) * hl_p(lambda, xs, t)?)
}

/// Parameters of a Hall-Littlewood measure with finitely many variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HlConfig {
    pub t: Rational,
    pub xs: Vec<Rational>,
    pub ys: Vec<Rational>,
    /// Largest `|lambda|` summed by [`brute_moments`].
    pub cutoff: u32,
}

impl HlConfig {
    pub fn new(t: Rational, xs: Vec<Rational>, ys: Vec<Rational>, cutoff: u32) -> Result<Self> {
        let cfg = Self { t, xs, ys, cutoff };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let one = Rational::one();
        if self.t > one || self.t < -one.clone() {
            return Err(Error::InvalidArgument(format!("t = {} must lie in [-1, 1]", self.t)));
        }
        for q in self.products() {
            if q.magnitude() >= one {
                return Err(Error::Divergent(format!("|x_i y_j| = {} is not below 1", q.magnitude())));
            }
        }
        Ok(())
    }

    /// All `x_i y_j`.
    pub fn products(&self) -> Vec<Rational> {
        self.xs
            .iter()
            .flat_map(|x| self.ys.iter().map(move |y| x * y))
            .collect()
    }
}

/// `Z = prod_{i,j} (1 - t x_i y_j) / (1 - x_i y_j)`.
pub fn z_hl(cfg: &HlConfig) -> Result<Rational> {
    cfg.validate()?;
    let one = Rational::one();
    Ok(cfg
        .products()
        .iter()
        .fold(one.clone(), |acc, q| acc * (&one - &cfg.t * q) / (&one - q)))
}

/// `E|lambda| = sum_k (1 - t^k) p_k(X) p_k(Y)`, summed in closed form per pair
/// `q = x_i y_j` as `q/(1-q) - tq/(1-tq)`.
pub fn mean_size(cfg: &HlConfig) -> Result<Rational> {
    cfg.validate()?;
    let one = Rational::one();
    Ok(cfg.products().iter().fold(Rational::zero(), |acc, q| {
        let tq = &cfg.t * q;
        acc + q / (&one - q) - &tq / (&one - &tq)
    }))
}

/// `Var|lambda| = sum_k k (1 - t^k) p_k(X) p_k(Y)`, per pair `q/(1-q)^2 - tq/(1-tq)^2`.
pub fn var_size(cfg: &HlConfig) -> Result<Rational> {
    cfg.validate()?;
    let one = Rational::one();
    Ok(cfg.products().iter().fold(Rational::zero(), |acc, q| {
        let tq = &cfg.t * q;
        let a = &one - q;
        let b = &one - &tq;
        acc + q / (&a * &a) - &tq / (&b * &b)
    }))
}

/// Truncated moments of `|lambda|` and a bound on what the truncation drops.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteMoments {
    pub mean: Rational,
    pub variance: Rational,
    /// Bound on `|true mean - mean|`.
    pub mean_tail: f64,
    /// Bound on `|true variance - variance|`.
    pub variance_tail: f64,
}

/// Largest cutoff for [`brute_moments`].
pub const BRUTE_CUTOFF_LIMIT: u32 = 30;

/// Moments of `|lambda|` by summing `Q_lambda(X) P_lambda(Y) / Z` over `|lambda| <= cutoff`.
///
/// For `t` in `[-1, 1]` the monomial coefficients of `P` and `Q` are nonnegative,
/// so the weight of degree `n` is at most the `u^n` coefficient of
/// `prod (1 + |x_i y_j| u) / (1 - |x_i y_j| u)`, divided by `Z`.
pub fn brute_moments(cfg: &HlConfig) -> Result<BruteMoments> {
    cfg.validate()?;
    check_scale("variables", cfg.xs.len().max(cfg.ys.len()) as u64, 3)?;
    check_scale("cutoff", cfg.cutoff as u64, BRUTE_CUTOFF_LIMIT as u64)?;
    let z = z_hl(cfg)?;
    let len = cfg.xs.len().min(cfg.ys.len());
    let lambdas: Vec<Partition> = (1..=cfg.cutoff)
        .flat_map(|n| enumerate_partitions(n, len))
        .collect();
    let weights: Vec<(u32, Rational)> = lambdas
        .par_iter()
        .map(|l| -> Result<_> {
            let w = hl_q(l, &cfg.xs, &cfg.t)? * hl_p(l, &cfg.ys, &cfg.t)?;
            Ok((l.size(), w))
        })
        .collect::<Result<_>>()?;
    let (mut s1, mut s2) = (Rational::zero(), Rational::zero());
    for (n, w) in weights {
        let n = Rational::from_integer(n.into());
        s1 += &n * &w;
        s2 += &n * &n * &w;
    }
    let mean = &s1 / &z;
    let second = &s2 / &z;
    let variance = &second - &mean * &mean;
    let products = cfg.products();
    let (tau1, tau2) = if products.is_empty() {
        (0.0, 0.0)
    } else {
        let bound = geometric_tail_bound(&products, cfg.cutoff as usize)?;
        let zf = z.as_f64();
        (
            bound.weighted_tail_sum(cfg.cutoff as u64 + 1, 1) / zf,
            bound.weighted_tail_sum(cfg.cutoff as u64 + 1, 2) / zf,
        )
    };
    let m = mean.magnitude().as_f64();
    Ok(BruteMoments {
        mean,
        variance,
        mean_tail: crate::series::inflate(tau1),
        variance_tail: crate::series::inflate(tau2 + 2.0 * m * tau1 + tau1 * tau1),
    })
}
