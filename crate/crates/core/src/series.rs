//! Truncated Laurent series over a [`Scalar`] with explicit exponent windows.
//!
//! A [`LaurentSeries`] stores the coefficients of `z^n` for `lo <= n <= hi`.
//! Everything outside the window is treated as zero by the arithmetic; callers
//! who need to reason about the neglected part use a [`TailBound`].
//!
//! Windows never grow implicitly: products default to the full product window
//! of the two stored windows (polynomial semantics), and callers that multiply
//! truncated series pass the window they can vouch for.

use crate::error::{Error, Result};
use crate::scalar::{Mode, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries<S> {
    lo: i64,
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentSeries<S> {
    /// Series with coefficients `coeffs[k]` at exponent `lo + k`.
    pub fn new(lo: i64, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let len = i64::try_from(coeffs.len()).map_err(|_| Error::WindowOverflow)?;
        lo.checked_add(len - 1).ok_or(Error::WindowOverflow)?;
        Ok(Self { lo, coeffs })
    }

    /// Power series `coeffs[0] + coeffs[1] z + ...`.
    pub fn power_series(coeffs: Vec<S>) -> Result<Self> {
        Self::new(0, coeffs)
    }

    pub fn zero(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::EmptyWindow);
        }
        let len = hi
            .checked_sub(lo)
            .and_then(|d| d.checked_add(1))
            .and_then(|d| usize::try_from(d).ok())
            .ok_or(Error::WindowOverflow)?;
        Self::new(lo, vec![S::zero(); len])
    }

    /// The constant 1 on the window `[0, order]`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = S::one();
        Self { lo: 0, coeffs }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + (self.coeffs.len() as i64 - 1)
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn is_power_series(&self) -> bool {
        self.lo == 0
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero outside the stored window.
    pub fn coeff(&self, n: i64) -> S {
        self.get(n).cloned().unwrap_or_else(S::zero)
    }

    pub fn get(&self, n: i64) -> Option<&S> {
        let idx = n.checked_sub(self.lo)?;
        usize::try_from(idx).ok().and_then(|i| self.coeffs.get(i))
    }

    /// The same series restricted (or zero-extended) to `[lo, hi]`.
    pub fn with_window(&self, lo: i64, hi: i64) -> Result<Self> {
        let mut out = Self::zero(lo, hi)?;
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c = self.coeff(lo + k as i64);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    /// Coefficientwise sum on the union window.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut out = Self::zero(lo, hi)?;
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            let n = lo + k as i64;
            *c = self.coeff(n) + other.coeff(n);
        }
        Ok(out)
    }

    /// Substitutes `z -> -1/z`; the window `[lo, hi]` becomes `[-hi, -lo]`.
    pub fn reflect_negated(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(k, c)| {
                let n = self.lo + k as i64;
                if n.rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        Self {
            lo: -self.hi(),
            coeffs,
        }
    }

    /// Product on `window` (default: the full product window `[lo_a + lo_b, hi_a + hi_b]`).
    pub fn mul(&self, other: &Self, window: Option<(i64, i64)>) -> Result<Self> {
        let full_lo = self.lo.checked_add(other.lo).ok_or(Error::WindowOverflow)?;
        let full_hi = self
            .hi()
            .checked_add(other.hi())
            .ok_or(Error::WindowOverflow)?;
        let (lo, hi) = window.unwrap_or((full_lo, full_hi));
        let mut out = Self::zero(lo, hi)?;
        for (k, slot) in out.coeffs.iter_mut().enumerate() {
            let n = lo + k as i64;
            // a_i b_{n-i} with both indices inside the stored windows
            let i_lo = self.lo.max(n - other.hi());
            let i_hi = self.hi().min(n - other.lo);
            let mut acc = S::zero();
            for i in i_lo..=i_hi {
                let a = &self.coeffs[(i - self.lo) as usize];
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * other.coeffs[(n - i - other.lo) as usize].clone();
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Largest window on which the product of two truncated power-type series is
    /// exact: both operands are only known up to their `hi`.
    pub fn safe_product_window(&self, other: &Self) -> (i64, i64) {
        let lo = self.lo + other.lo;
        let hi = (self.lo + other.hi()).min(other.lo + self.hi());
        (lo, hi)
    }
}

/// Runtime-tagged series, used where the scalar mode is chosen at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum DynSeries {
    Exact(LaurentSeries<Rational>),
    Approx(LaurentSeries<f64>),
}

impl DynSeries {
    pub fn mode(&self) -> Mode {
        match self {
            DynSeries::Exact(_) => Mode::Exact,
            DynSeries::Approx(_) => Mode::Approx,
        }
    }
}

impl From<LaurentSeries<Rational>> for DynSeries {
    fn from(s: LaurentSeries<Rational>) -> Self {
        DynSeries::Exact(s)
    }
}

impl From<LaurentSeries<f64>> for DynSeries {
    fn from(s: LaurentSeries<f64>) -> Self {
        DynSeries::Approx(s)
    }
}

/// Product of runtime-tagged series. Mixed modes are rejected.
pub fn series_mul(a: &DynSeries, b: &DynSeries, window: Option<(i64, i64)>) -> Result<DynSeries> {
    match (a, b) {
        (DynSeries::Exact(x), DynSeries::Exact(y)) => Ok(x.mul(y, window)?.into()),
        (DynSeries::Approx(x), DynSeries::Approx(y)) => Ok(x.mul(y, window)?.into()),
        _ => Err(Error::ModeMismatch {
            left: a.mode(),
            right: b.mode(),
        }),
    }
}

/// `exp(a)` through `z^order`, by `n e_n = sum_{k=1..n} k a_k e_{n-k}`.
///
/// `a` must vanish at every exponent `<= 0`.
pub fn series_exp<S: Scalar>(a: &LaurentSeries<S>, order: usize) -> Result<LaurentSeries<S>> {
    for n in a.lo()..=a.hi().min(0) {
        if !a.coeff(n).is_zero() {
            return Err(Error::NonzeroLowTerm(n));
        }
    }
    let mut e = Vec::with_capacity(order + 1);
    e.push(S::one());
    let weighted: Vec<S> = (0..=order)
        .map(|k| a.coeff(k as i64) * S::from_i64(k as i64))
        .collect();
    for n in 1..=order {
        let mut acc = S::zero();
        for k in 1..=n {
            if weighted[k].is_zero() {
                continue;
            }
            acc = acc + weighted[k].clone() * e[n - k].clone();
        }
        e.push(acc / S::from_i64(n as i64));
    }
    LaurentSeries::power_series(e)
}

fn check_below_one<S: Scalar>(xs: &[S]) -> Result<()> {
    for x in xs {
        if x.magnitude() >= S::one() {
            return Err(Error::Divergent(format!(
                "|x| = {} is not below 1",
                x.magnitude().as_f64()
            )));
        }
    }
    Ok(())
}

/// Expansion of `prod_i (1 + sign x_i z) / (1 - sign x_i z)` through `z^order`.
pub fn product_form<S: Scalar>(xs: &[S], order: usize, sign: i8) -> Result<LaurentSeries<S>> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {sign}")));
    }
    check_below_one(xs)?;
    let mut acc = LaurentSeries::one(order);
    for x in xs {
        let x = if sign == 1 { x.clone() } else { -x.clone() };
        // (1 + xz)/(1 - xz) = 1 + 2 sum_{n>=1} x^n z^n
        let two = S::from_i64(2);
        let mut factor = Vec::with_capacity(order + 1);
        factor.push(S::one());
        let mut pw = S::one();
        for _ in 1..=order {
            pw = pw * x.clone();
            factor.push(two.clone() * pw.clone());
        }
        let factor = LaurentSeries::power_series(factor)?;
        acc = acc.mul(&factor, Some((0, order as i64)))?;
    }
    Ok(acc)
}

/// Certified geometric bound on the coefficients of a product-form series.
///
/// With every variable bounded by `r` in magnitude, the coefficients of
/// `prod (1 + x_i z)/(1 - x_i z)` are dominated termwise by those of the
/// majorant `((1 + r z)/(1 - r z))^m`. A Cauchy estimate of the majorant on the
/// circle `|z| = s / r` gives `|c_n| <= M(s) (r/s)^n` with
/// `M(s) = ((1 + s)/(1 - s))^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    radius: f64,
    eval: f64,
    scale: f64,
    ratio: f64,
    order: usize,
}

impl TailBound {
    /// Bound of the form `scale * ratio^n`, valid for all `n >= 0`.
    pub fn geometric(scale: f64, ratio: f64, order: usize) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) || !(0.0..1.0).contains(&ratio) {
            return Err(Error::InvalidArgument(format!(
                "geometric bound needs scale >= 0 and 0 <= ratio < 1, got {scale}, {ratio}"
            )));
        }
        Ok(Self {
            radius: ratio,
            eval: 1.0,
            scale,
            ratio,
            order,
        })
    }

    /// Common magnitude bound `r` of the variables.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Normalized evaluation radius `s`.
    pub fn eval_radius(&self) -> f64 {
        self.eval
    }

    /// `M(s)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `r / s`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Upper bound on the magnitude of the coefficient of `z^n`.
    pub fn bound_at(&self, n: i64) -> f64 {
        if n == 0 {
            return self.scale;
        }
        inflate(self.scale * self.ratio.powi(n.unsigned_abs().min(i32::MAX as u64) as i32))
    }

    /// Upper bound on `sum_{n >= from} |c_n|`.
    pub fn tail_sum(&self, from: u64) -> f64 {
        if from == 0 {
            return inflate(self.scale / (1.0 - self.ratio));
        }
        inflate(self.bound_at(from as i64) / (1.0 - self.ratio))
    }

    /// Upper bound on `sum_{n >= from} n^power |c_n|`.
    pub fn weighted_tail_sum(&self, from: u64, power: u32) -> f64 {
        weighted_geometric_tail(self.scale, self.ratio, from, power)
    }
}

/// Upper bound on `sum_{n >= from} n^power * scale * ratio^n`.
pub(crate) fn weighted_geometric_tail(scale: f64, ratio: f64, from: u64, power: u32) -> f64 {
    if scale == 0.0 || ratio == 0.0 {
        return if from == 0 && power == 0 { scale } else { 0.0 };
    }
    // Term ratio ((n+1)/n)^p * ratio is maximal at the first index.
    let mut start = from.max(1);
    loop {
        let q = ((start as f64 + 1.0) / start as f64).powi(power as i32) * ratio;
        if q < 1.0 {
            let first = (start as f64).powi(power as i32) * scale * ratio.powf(start as f64);
            let head: f64 = (from.max(1)..start)
                .map(|n| (n as f64).powi(power as i32) * scale * ratio.powf(n as f64))
                .sum();
            let zero_term = if from == 0 && power == 0 { scale } else { 0.0 };
            return inflate(head + first / (1.0 - q) + zero_term);
        }
        start += 1;
    }
}

/// Rounds a computed bound up by a relative margin covering `f64` evaluation error.
pub(crate) fn inflate(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }
}

/// [`TailBound`] for `prod (1 + x_i z)/(1 - x_i z)` at the default radius `s = (r + 1)/2`.
pub fn geometric_tail_bound<S: Scalar>(xs: &[S], order: usize) -> Result<TailBound> {
    let r = max_magnitude(xs);
    geometric_tail_bound_with(xs, order, (r + 1.0) / 2.0)
}

/// [`TailBound`] with a caller-chosen normalized radius `s` in `(r, 1)`.
pub fn geometric_tail_bound_with<S: Scalar>(xs: &[S], order: usize, s: f64) -> Result<TailBound> {
    let r = max_magnitude(xs);
    if r >= 1.0 {
        return Err(Error::Divergent(format!("variable magnitude {r} is not below 1")));
    }
    if !(s > r && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "evaluation radius {s} must lie in ({r}, 1)"
        )));
    }
    let m = xs.len() as i32;
    Ok(TailBound {
        radius: r,
        eval: s,
        scale: inflate(((1.0 + s) / (1.0 - s)).powi(m)),
        ratio: r / s,
        order,
    })
}

/// Largest `|x_i|`, rounded up.
pub(crate) fn max_magnitude<S: Scalar>(xs: &[S]) -> f64 {
    xs.iter()
        .map(|x| {
            let v = x.magnitude().as_f64();
            if v == 0.0 {
                0.0
            } else {
                v * (1.0 + 4.0 * f64::EPSILON)
            }
        })
        .fold(0.0, f64::max)
}

/// Inverse of a power series with unit constant term, through `z^order`
/// (triangular solve).
pub fn series_inverse<S: Scalar>(a: &LaurentSeries<S>, order: usize) -> Result<LaurentSeries<S>> {
    if a.lo() > 0 || a.coeff(0).is_zero() {
        return Err(Error::InvalidArgument("series must have a nonzero constant term".into()));
    }
    for n in a.lo()..0 {
        if !a.coeff(n).is_zero() {
            return Err(Error::NonzeroLowTerm(n));
        }
    }
    let c0 = a.coeff(0);
    let mut inv: Vec<S> = Vec::with_capacity(order + 1);
    inv.push(S::one() / c0.clone());
    for n in 1..=order {
        let mut acc = S::zero();
        for k in 1..=n {
            acc = acc + a.coeff(k as i64) * inv[n - k].clone();
        }
        inv.push(-acc / c0.clone());
    }
    LaurentSeries::power_series(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn exact(lo: i64, cs: &[i64]) -> LaurentSeries<Rational> {
        LaurentSeries::new(lo, cs.iter().map(|&c| rat(c, 1)).collect()).unwrap()
    }

    #[test]
    fn polynomial_product() {
        let a = exact(0, &[1, 1]);
        let b = exact(0, &[1, -1]);
        let p = a.mul(&b, None).unwrap();
        assert_eq!(p, exact(0, &[1, 0, -1]));
    }

    #[test]
    fn laurent_window_product() {
        let a = exact(-1, &[1, 1]);
        let b = exact(0, &[-1, 1]);
        let p = a.mul(&b, None).unwrap();
        assert_eq!(p, exact(-1, &[-1, 0, 1]));
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let a: DynSeries = exact(0, &[1]).into();
        let b: DynSeries = LaurentSeries::power_series(vec![1.0f64]).unwrap().into();
        assert_eq!(
            series_mul(&a, &b, None),
            Err(Error::ModeMismatch {
                left: Mode::Exact,
                right: Mode::Approx
            })
        );
    }

    #[test]
    fn window_overflow_is_reported() {
        let a = LaurentSeries::new(i64::MAX - 1, vec![rat(1, 1), rat(1, 1)]).unwrap();
        let b = exact(1, &[1]);
        assert_eq!(a.mul(&b, None), Err(Error::WindowOverflow));
        assert!(LaurentSeries::new(i64::MAX, vec![rat(1, 1), rat(1, 1)]).is_err());
    }

    #[test]
    fn inverse_times_series_is_one() {
        let q = product_form(&[rat(1, 2)], 12, 1).unwrap();
        let inv = series_inverse(&q, 12).unwrap();
        let one = q.mul(&inv, Some((0, 12))).unwrap();
        assert_eq!(one, LaurentSeries::one(12));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = exact(0, &[0, 0, 0]);
        assert_eq!(series_exp(&z, 5).unwrap(), LaurentSeries::one(5));
    }

    #[test]
    fn exp_of_linear_term() {
        let x = rat(1, 3);
        let a = LaurentSeries::new(1, vec![rat(2, 1) * x.clone()]).unwrap();
        let e = series_exp(&a, 4).unwrap();
        let mut fact = rat(1, 1);
        for n in 0..=4i64 {
            if n > 0 {
                fact = fact * rat(n, 1);
            }
            let expected = (rat(2, 1) * x.clone()).powi(n as u32) / fact.clone();
            assert_eq!(e.coeff(n), expected);
        }
    }

    #[test]
    fn exp_rejects_constant_term() {
        let a = exact(0, &[1, 1]);
        assert_eq!(series_exp(&a, 3), Err(Error::NonzeroLowTerm(0)));
        let b = exact(-1, &[1, 0, 1]);
        assert_eq!(series_exp(&b, 3), Err(Error::NonzeroLowTerm(-1)));
    }

    #[test]
    fn exp_with_cubic_term_matches_one_variable_product() {
        // exp(2 p1 z + (2/3) p3 z^3 + ...) with p_k = x^k is (1 + xz)/(1 - xz)
        let x = rat(2, 7);
        let arg = LaurentSeries::new(
            1,
            vec![rat(2, 1) * x.clone(), rat(0, 1), rat(2, 3) * x.powi(3)],
        )
        .unwrap();
        let e = series_exp(&arg, 3).unwrap();
        let expected = rat(4, 3) * x.powi(3) + rat(2, 3) * x.powi(3);
        assert_eq!(e.coeff(3), expected);
        let pf = product_form(&[x.clone()], 3, 1).unwrap();
        assert_eq!(e.coeff(3), pf.coeff(3));
    }

    #[test]
    fn product_form_examples() {
        let x = rat(1, 5);
        let q = product_form(&[x.clone()], 6, 1).unwrap();
        for n in 1..=6 {
            assert_eq!(q.coeff(n), rat(2, 1) * x.powi(n as u32));
        }
        let empty: Vec<Rational> = vec![];
        assert_eq!(product_form(&empty, 4, 1).unwrap(), LaurentSeries::one(4));
        let q2 = product_form(&[rat(1, 2), rat(1, 3)], 2, 1).unwrap();
        assert_eq!(q2.coeff(2), rat(25, 18));
        assert!(product_form(&[rat(1, 1)], 3, 1).is_err());
        assert!(product_form(&[rat(-3, 2)], 3, -1).is_err());
    }

    #[test]
    fn product_form_negative_sign() {
        let q = product_form(&[rat(1, 3)], 3, -1).unwrap();
        assert_eq!(q.coeff(1), rat(-2, 3));
        assert_eq!(q.coeff(2), rat(2, 9));
    }

    #[test]
    fn reflection_substitutes_minus_inverse() {
        let a = exact(0, &[1, 2, 3]);
        let r = a.reflect_negated();
        assert_eq!(r.lo(), -2);
        assert_eq!(r.coeff(-1), rat(-2, 1));
        assert_eq!(r.coeff(-2), rat(3, 1));
        assert_eq!(r.coeff(0), rat(1, 1));
    }

    #[test]
    fn tail_bound_at_half_radius() {
        let b = geometric_tail_bound_with(&[rat(1, 10)], 20, 0.5).unwrap();
        let stated = (1.0 + 1.0 / 20.0) / (1.0 - 1.0 / 20.0) * 2f64.powi(-21);
        assert!(b.bound_at(21) <= stated);
        assert!(b.bound_at(21) >= 2.0 * 0.1f64.powi(21));
    }

    #[test]
    fn tail_bound_empty_is_zero() {
        let empty: Vec<Rational> = vec![];
        let b = geometric_tail_bound(&empty, 10).unwrap();
        for n in 1..30 {
            assert_eq!(b.bound_at(n), 0.0);
        }
    }

    #[test]
    fn tail_bound_dominates_two_variables() {
        let xs = [rat(1, 10), rat(1, 10)];
        let b = geometric_tail_bound(&xs, 10).unwrap();
        let q = product_form(&xs, 30, 1).unwrap();
        for n in 0..=30 {
            assert!(q.coeff(n).as_f64().abs() <= b.bound_at(n));
        }
        assert!(geometric_tail_bound(&[rat(1, 1)], 3).is_err());
    }

    #[test]
    fn weighted_tail_dominates_direct_sum() {
        let (scale, ratio) = (3.0f64, 0.4f64);
        for power in 0..3u32 {
            for from in [0u64, 1, 5, 20] {
                let direct: f64 = (from..2000)
                    .map(|n| (n as f64).powi(power as i32) * scale * ratio.powi(n as i32))
                    .sum();
                let bound = weighted_geometric_tail(scale, ratio, from, power);
                assert!(bound >= direct * (1.0 - 1e-12), "{power} {from}: {bound} < {direct}");
                assert!(bound <= direct * 10.0 + 1e-300);
            }
        }
    }
}
