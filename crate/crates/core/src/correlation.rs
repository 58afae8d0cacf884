//! Pfaffian correlation functions of the shifted Schur measure.
//!
//! The kernel is built from the Laurent coefficients `a_n` of
//! `J(z) = Q_X(z) Q_Y(-1/z)`:
//!
//! `K(u, v) = eps(u, v) / 2 * (a_u a_v + 2 sum_{k>=1} (-1)^k a_{u+k} a_{v-k})`,
//!
//! which is the coefficient of `z^u w^v` in `J(z) J(w) (z - w)/(z + w) / 2` with
//! the cross factor expanded in powers of `w/z`. Every value carries an error
//! bound covering the truncation of `a_n` and of the inner sum.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bessel::{bessel_j_bound, bessel_j_table};
use crate::error::{Error, Result};
use crate::partition::{enumerate_strict, StrictPartition};
use crate::pfaffian::{pfaffian, SkewMatrix};
use crate::scalar::{Mode, Rational, Scalar};
use crate::schur_q::{q_coeffs, required_order, schur_q_from_coeffs, z_ss, PowerSumSpec};
use crate::series::{geometric_tail_bound, inflate, LaurentSeries};

/// A value with an upper bound on its distance from the exact quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<S> {
    pub value: S,
    pub error: f64,
}

impl<S: Scalar> Estimate<S> {
    pub fn approx(&self) -> f64 {
        self.value.as_f64()
    }

    /// Whether `other` lies within the sum of both error bounds.
    pub fn agrees_with<T: Scalar>(&self, other: &Estimate<T>, slack: f64) -> bool {
        (self.approx() - other.approx()).abs() <= self.error + other.error + slack
    }
}

/// Inputs of the correlation kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<S> {
    pub x: PowerSumSpec<S>,
    pub y: PowerSumSpec<S>,
    /// `a_n` is stored for `-order <= n <= order`.
    pub order: usize,
    /// Inner-sum depth; `None` means `order / 2`.
    pub inner_depth: Option<usize>,
}

impl<S: Scalar> KernelSpec<S> {
    pub fn new(x: PowerSumSpec<S>, y: PowerSumSpec<S>, order: usize) -> Self {
        Self {
            x,
            y,
            order,
            inner_depth: None,
        }
    }

    pub fn with_inner_depth(mut self, depth: usize) -> Self {
        self.inner_depth = Some(depth);
        self
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    fn depth(&self) -> usize {
        self.inner_depth.unwrap_or(self.order / 2)
    }
}

/// A finite set `{k_1 > ... > k_N}` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CorrelationQuery {
    ks: Vec<u32>,
}

impl CorrelationQuery {
    /// Accepts the elements in any order; duplicates and zero are rejected.
    pub fn new(mut ks: Vec<u32>) -> Result<Self> {
        ks.sort_unstable_by(|a, b| b.cmp(a));
        if ks.contains(&0) || ks.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "correlation sets need distinct positive elements, got {ks:?}"
            )));
        }
        Ok(Self { ks })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Elements in decreasing order.
    pub fn elements(&self) -> &[u32] {
        &self.ks
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.ks.iter().map(|&k| k as u64).sum()
    }
}

/// `eps(u, v)`: `1` for `u, v > 0`, `(-1)^v` for `u > 0 > v`, `(-1)^(u+v)` for
/// `u, v < 0`. The remaining sign pattern is the symmetric extension, which makes
/// the kernel antisymmetric.
pub fn epsilon(u: i64, v: i64) -> Result<i8> {
    if u == 0 || v == 0 {
        return Err(Error::InvalidArgument("eps(u, v) needs nonzero arguments".into()));
    }
    let parity = |n: i64| if n.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(match (u > 0, v > 0) {
        (true, true) => 1,
        (true, false) => parity(v),
        (false, false) => parity(u + v),
        (false, true) => parity(u),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Majorant {
    /// `|a_n| <= c rx^n` for `n >= 0`, `c ry^|n|` for `n < 0`.
    Geometric { c: f64, rx: f64, ry: f64 },
    /// `|a_n| = |J_n(x)|`.
    Bessel { x: f64 },
}

impl Majorant {
    fn bound(&self, n: i64) -> f64 {
        match *self {
            Majorant::Geometric { c, rx, ry } => {
                let e = n.unsigned_abs().min(i32::MAX as u64) as i32;
                if n >= 0 {
                    c * rx.powi(e)
                } else {
                    c * ry.powi(e)
                }
            }
            Majorant::Bessel { x } => bessel_j_bound(n, x),
        }
    }

    /// Upper bound on `sum_{k > from} B(u + k) B(v - k)`.
    fn inner_tail(&self, u: i64, v: i64, from: i64) -> f64 {
        let mut sum = 0.0;
        let mut k = from + 1;
        for _ in 0..10_000_000 {
            let term = self.bound(u + k) * self.bound(v - k);
            if let Some(q) = self.ratio_after(u, v, k) {
                if q < 1.0 {
                    return inflate(sum + term / (1.0 - q));
                }
            }
            sum += term;
            k += 1;
        }
        f64::INFINITY
    }

    /// Bound on `T(k+j+1)/T(k+j)` for all `j >= 0`, when the terms have entered
    /// their monotone regime.
    fn ratio_after(&self, u: i64, v: i64, k: i64) -> Option<f64> {
        if u + k < 0 || v - k > 0 {
            return None;
        }
        match *self {
            Majorant::Geometric { rx, ry, .. } => Some(rx * ry),
            Majorant::Bessel { x } => {
                // below the cap of 1 each factor shrinks by at most half / (index + 1)
                let half = x.abs() / 2.0;
                let a = (u + k + 1) as f64;
                let b = (k - v + 1) as f64;
                if a <= half || self.bound(u + k) >= 1.0 {
                    return None;
                }
                let fb = if b > half && self.bound(v - k) < 1.0 { half / b } else { 1.0 };
                Some(half / a * fb)
            }
        }
    }
}

/// `|q_k| <= c rho^k` for the specialization.
fn q_majorant<S: Scalar>(spec: &PowerSumSpec<S>, order: usize) -> Result<(f64, f64)> {
    if let Some(vars) = spec.variables() {
        let b = geometric_tail_bound(&vars, order)?;
        return Ok((b.scale(), b.ratio()));
    }
    match spec {
        PowerSumSpec::Exponential { p1 } => {
            // c^k / k! <= e^{2c} 2^{-k}
            let c = 2.0 * p1.magnitude().as_f64();
            Ok((inflate((2.0 * c).exp()), 0.5))
        }
        other => Err(Error::Unsupported(format!(
            "the correlation kernel needs finitely many variables or an exponential specialization, got {}",
            other.kind_name()
        ))),
    }
}

/// Precomputed Laurent coefficients of `J` with per-coefficient error bounds.
#[derive(Debug, Clone)]
pub struct Kernel<S> {
    spec: KernelSpec<S>,
    coeffs: LaurentSeries<S>,
    coeff_error: Vec<f64>,
    majorant: Majorant,
}

fn is_bessel_pair<S: Scalar>(spec: &KernelSpec<S>) -> Option<f64> {
    if S::MODE != Mode::Approx {
        return None;
    }
    match (&spec.x, &spec.y) {
        (PowerSumSpec::Exponential { p1: a }, PowerSumSpec::Exponential { p1: b }) if a == b => {
            Some(a.as_f64())
        }
        _ => None,
    }
}

impl<S: Scalar> Kernel<S> {
    pub fn new(spec: KernelSpec<S>) -> Result<Self> {
        let t = spec.order;
        let ti = t as i64;
        if let Some(beta) = is_bessel_pair(&spec) {
            // exp(2 beta (z - 1/z)) generates J_n(4 beta)
            let x = 4.0 * beta;
            let table = bessel_j_table(t, x);
            let mut coeffs = Vec::with_capacity(2 * t + 1);
            for n in -ti..=ti {
                let v = table[n.unsigned_abs() as usize];
                let v = if n < 0 && n % 2 != 0 { -v } else { v };
                coeffs.push(S::from_rational(&f64_to_rational(v)));
            }
            let coeff_error = vec![1e-13; 2 * t + 1];
            return Ok(Self {
                spec,
                coeffs: LaurentSeries::new(-ti, coeffs)?,
                coeff_error,
                majorant: Majorant::Bessel { x },
            });
        }
        let qx = q_coeffs(&spec.x, t)?;
        let qy = q_coeffs(&spec.y, t)?;
        let (cx, rx) = q_majorant(&spec.x, t)?;
        let (cy, ry) = q_majorant(&spec.y, t)?;
        let prod = rx * ry;
        if prod >= 1.0 {
            return Err(Error::Divergent(format!(
                "J(z) has no annulus of convergence (rx * ry = {prod})"
            )));
        }
        let c = inflate(cx * cy / (1.0 - prod));
        let fp = if S::MODE == Mode::Approx { 1e-15 * (t as f64 + 1.0) } else { 0.0 };
        let mut coeffs = Vec::with_capacity(2 * t + 1);
        let mut coeff_error = Vec::with_capacity(2 * t + 1);
        for n in -ti..=ti {
            let mut acc = S::zero();
            let m0 = if n < 0 { (-n) as usize } else { 0 };
            for m in m0..=t {
                let ix = (n + m as i64) as usize;
                if ix > t {
                    break;
                }
                let term = qx[ix].clone() * qy[m].clone();
                acc = if m % 2 == 0 { acc + term } else { acc - term };
            }
            coeffs.push(acc);
            let e = n.unsigned_abs() as i32;
            let omitted = (t as i32 + 1 - e).max(0);
            let trunc = if n >= 0 {
                c * rx.powi(e) * prod.powi(omitted)
            } else {
                c * ry.powi(e) * prod.powi(omitted)
            };
            let bound = if n >= 0 { c * rx.powi(e) } else { c * ry.powi(e) };
            coeff_error.push(inflate(trunc + fp * bound));
        }
        Ok(Self {
            spec,
            coeffs: LaurentSeries::new(-ti, coeffs)?,
            coeff_error,
            majorant: Majorant::Geometric { c, rx, ry },
        })
    }

    pub fn spec(&self) -> &KernelSpec<S> {
        &self.spec
    }

    /// `a_n` on the window `[-order, order]`.
    pub fn coeffs(&self) -> &LaurentSeries<S> {
        &self.coeffs
    }

    fn a(&self, n: i64) -> (S, f64) {
        let t = self.spec.order as i64;
        if n.abs() > t {
            (S::zero(), self.majorant.bound(n))
        } else {
            (self.coeffs.coeff(n), self.coeff_error[(n + t) as usize])
        }
    }

    /// `K(u, v)` with its error bound.
    pub fn entry(&self, u: i64, v: i64) -> Result<Estimate<S>> {
        let sign = epsilon(u, v)?;
        if u < 0 && v > 0 {
            let e = self.entry(v, u)?;
            return Ok(Estimate {
                value: -e.value,
                error: e.error,
            });
        }
        let t = self.spec.order as i64;
        if u.abs() > t || v.abs() > t {
            return Err(Error::InsufficientOrder {
                need: u.abs().max(v.abs()) as usize,
                have: self.spec.order,
            });
        }
        let depth = self.spec.depth() as i64;
        let b = |n: i64| self.majorant.bound(n);
        let (au, eu) = self.a(u);
        let (av, ev) = self.a(v);
        let mut sum = au.clone() * av.clone();
        let mut err = 0.5 * (eu * b(v) + b(u) * ev + eu * ev);
        let mut magnitude = (au.as_f64() * av.as_f64()).abs();
        let two = S::from_i64(2);
        for k in 1..=depth {
            let (x, ex) = self.a(u + k);
            let (y, ey) = self.a(v - k);
            err += ex * b(v - k) + b(u + k) * ey + ex * ey;
            if x.is_zero() || y.is_zero() {
                continue;
            }
            magnitude += 2.0 * (x.as_f64() * y.as_f64()).abs();
            let term = two.clone() * x * y;
            sum = if k % 2 == 1 { sum - term } else { sum + term };
        }
        err += self.majorant.inner_tail(u, v, depth);
        if S::MODE == Mode::Approx {
            err += 4.0 * f64::EPSILON * (depth as f64 + 2.0) * magnitude;
        }
        let value = sum / two;
        let value = if sign < 0 { -value } else { value };
        if !err.is_finite() {
            return Err(Error::Uncertified(format!("K({u}, {v}) error bound is not finite")));
        }
        Ok(Estimate {
            value,
            error: inflate(err),
        })
    }

    /// `(u_i, u_j)` index pair of entry `(i, j)`, `i < j`, of `M(A)`.
    fn index_pair(a: &[u32], i: usize, j: usize) -> (i64, i64) {
        let n = a.len();
        let k = |idx: usize| a[idx] as i64;
        if j < n {
            (k(i), k(j))
        } else if i < n {
            (k(i), -k(2 * n - 1 - j))
        } else {
            (-k(2 * n - 1 - i), -k(2 * n - 1 - j))
        }
    }

    /// `M(A)` with entrywise error bounds.
    pub fn matrix(&self, query: &CorrelationQuery) -> Result<(SkewMatrix<S>, SkewMatrix<f64>)> {
        let a = query.elements();
        let dim = 2 * a.len();
        let pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .collect();
        let entries: Vec<Estimate<S>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (u, v) = Self::index_pair(a, i, j);
                self.entry(u, v)
            })
            .collect::<Result<_>>()?;
        let mut it = entries.into_iter();
        let mut values = SkewMatrix::zeros(dim);
        let mut errors = SkewMatrix::zeros(dim);
        for &(i, j) in &pairs {
            let e = it.next().expect("one estimate per pair");
            values.set(i, j, e.value);
            errors.set(i, j, e.error);
        }
        Ok((values, errors))
    }

    /// `rho(A) = Pf(M(A))` with a propagated error bound.
    pub fn rho(&self, query: &CorrelationQuery) -> Result<Estimate<S>> {
        let (m, e) = self.matrix(query)?;
        let value = pfaffian(&m)?;
        let abs = m.map(|v| v.magnitude().as_f64());
        let mut error = pfaffian_perturbation_bound(&abs, &e)?;
        if S::MODE == Mode::Approx {
            let dim = m.dim() as f64;
            error += 16.0 * f64::EPSILON * dim * dim * hafnian(&abs)?;
        }
        Ok(Estimate {
            value,
            error: inflate(error),
        })
    }
}

// f64 values enter exact storage only through the Bessel route, which is approximate anyway.
fn f64_to_rational(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(|| Rational::from_integer(0.into()))
}

/// Largest dimension for the hafnian-based error propagation.
pub const HAFNIAN_MAX_DIM: usize = 20;

/// Hafnian of a symmetric nonnegative matrix given by its upper triangle.
pub fn hafnian(m: &SkewMatrix<f64>) -> Result<f64> {
    let n = m.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    crate::error::check_scale("matrix dimension", n as u64, HAFNIAN_MAX_DIM as u64)?;
    let w = |i: usize, j: usize| if i < j { m.get(i, j) } else { m.get(j, i) };
    let full = (1usize << n) - 1;
    // dp[mask] = sum over perfect matchings of the indices in mask
    let mut dp = vec![0.0f64; 1 << n];
    dp[0] = 1.0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = 0.0;
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            acc += w(i, j) * dp[rest & !(1 << j)];
        }
        dp[mask] = acc;
    }
    Ok(dp[full])
}

/// Bound on `|Pf(M) - Pf(M')|` when `|M'_ij| <= abs_ij` and `|M_ij - M'_ij| <= err_ij`:
/// `Haf(abs + err) - Haf(abs)`, since each matching term is a product of entries.
pub fn pfaffian_perturbation_bound(abs: &SkewMatrix<f64>, err: &SkewMatrix<f64>) -> Result<f64> {
    if err.upper_triangle().iter().all(|&e| e == 0.0) {
        return Ok(0.0);
    }
    let n = abs.dim();
    let sum = SkewMatrix::from_fn(n, |i, j| abs.get(i, j) + err.get(i, j));
    let hi = hafnian(&sum)?;
    let lo = hafnian(abs)?;
    Ok(inflate((hi - lo).max(0.0) + 4.0 * f64::EPSILON * hi))
}

/// Laurent coefficients of `J(z)` on `[-order, order]`.
pub fn j_coeffs<S: Scalar>(spec: &KernelSpec<S>) -> Result<LaurentSeries<S>> {
    Ok(Kernel::new(spec.clone())?.coeffs)
}

pub fn kernel_entry<S: Scalar>(spec: &KernelSpec<S>, u: i64, v: i64) -> Result<Estimate<S>> {
    Kernel::new(spec.clone())?.entry(u, v)
}

pub fn assemble_m<S: Scalar>(spec: &KernelSpec<S>, query: &CorrelationQuery) -> Result<SkewMatrix<S>> {
    Ok(Kernel::new(spec.clone())?.matrix(query)?.0)
}

pub fn rho_pfaffian<S: Scalar>(spec: &KernelSpec<S>, query: &CorrelationQuery) -> Result<Estimate<S>> {
    Kernel::new(spec.clone())?.rho(query)
}

/// Exact weights `Q_lambda(X) P_lambda(Y) / Z_SS` for every strict `lambda` up to a size cutoff.
#[derive(Debug, Clone)]
pub struct BruteForceTable {
    cutoff: u32,
    weights: HashMap<StrictPartition, Rational>,
    tail: f64,
}

impl BruteForceTable {
    pub fn new(x: &PowerSumSpec<Rational>, y: &PowerSumSpec<Rational>, cutoff: u32) -> Result<Self> {
        let (xs, ys) = match (x.variables(), y.variables()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Unsupported(
                    "brute-force correlations need finitely many variables".into(),
                ))
            }
        };
        let z = z_ss(x, y)?;
        let qx = q_coeffs(x, 2 * cutoff as usize)?;
        let qy = q_coeffs(y, 2 * cutoff as usize)?;
        let lambdas: Vec<StrictPartition> = (0..=cutoff).flat_map(enumerate_strict).collect();
        let weights = lambdas
            .into_par_iter()
            .map(|lam| {
                let order = required_order(&lam) + 1;
                let qxl = schur_q_from_coeffs(&lam, &qx[..order.min(qx.len())])?;
                let qyl = schur_q_from_coeffs(&lam, &qy[..order.min(qy.len())])?;
                let p = qyl / Rational::from_integer((1u64 << lam.length()).into());
                Ok((lam, qxl * p / z.clone()))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        // |Q_lambda(X) P_lambda(Y)| summed over |lambda| = d is at most the u^d
        // coefficient of prod (1 + |x_i y_j| u)/(1 - |x_i y_j| u)
        let w: Vec<f64> = xs
            .iter()
            .flat_map(|a| ys.iter().map(move |b| (a.clone() * b.clone()).as_f64().abs()))
            .collect();
        let bound = geometric_tail_bound(&w, cutoff as usize)?;
        let tail = inflate(bound.tail_sum(cutoff as u64 + 1) / z.as_f64());
        Ok(Self {
            cutoff,
            weights,
            tail,
        })
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Total weight of all partitions beyond the cutoff, bounded above.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn weight(&self, lambda: &StrictPartition) -> Option<&Rational> {
        self.weights.get(lambda)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Truncated `rho(A)` with the tail bound as its error.
    pub fn rho(&self, query: &CorrelationQuery) -> Estimate<Rational> {
        let mut value = Rational::from_integer(0.into());
        for (lam, w) in &self.weights {
            if lam.contains_all(query.elements()) {
                value += w.clone();
            }
        }
        Estimate {
            value,
            error: self.tail,
        }
    }
}

/// `rho(A)` by direct summation over strict partitions of size at most `cutoff`.
pub fn rho_bruteforce(
    spec: &KernelSpec<Rational>,
    query: &CorrelationQuery,
    cutoff: u32,
) -> Result<Estimate<Rational>> {
    if (cutoff as u64) < query.sum() {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} is below the sum {} of the query",
            query.sum()
        )));
    }
    Ok(BruteForceTable::new(&spec.x, &spec.y, cutoff)?.rho(query))
}
