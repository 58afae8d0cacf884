//! The Hall-Littlewood measure under the principal specialization
//! `X = Y = (t, t^2, ...)`, `0 < t < 1`, and the law of its first row.

use crate::correlation::Estimate;
use crate::error::{check_scale, Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::series::inflate;

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must lie in (0, 1)")));
    }
    Ok(())
}

/// `1 - prod (1 - a_r)` lies within `e^x - 1` of its truncation when `sum_{dropped} a_r / (1 - a_r) <= x`.
fn log_tail_to_relative(x: f64) -> f64 {
    inflate(x.exp_m1())
}

/// `prod_{r >= 2} (1 - t^r)`, the inverse of the partition function.
pub fn inverse_partition_function(t: f64) -> Result<Estimate<f64>> {
    check_t(t)?;
    let mut value = 1.0;
    let mut r = 2;
    loop {
        let a = t.powi(r);
        value *= 1.0 - a;
        if a < 1e-17 {
            break;
        }
        r += 1;
    }
    let dropped = t.powi(r + 1) / ((1.0 - t) * (1.0 - t.powi(r + 1)));
    let rounding = 4.0 * f64::EPSILON * r as f64;
    Ok(Estimate {
        value,
        error: inflate(value * (log_tail_to_relative(dropped) + rounding)),
    })
}

/// `(t; t)_m = prod_{j=1}^m (1 - t^j)`.
fn t_pochhammer(t: f64, m: usize) -> f64 {
    (1..=m as i32).map(|j| 1.0 - t.powi(j)).product()
}

/// `P(lambda) = prod_{r>=2}(1 - t^r) t^{sum (lambda'_j)^2 + |lambda|} / prod_j (t;t)_{m_j}`.
pub fn principal_prob(lambda: &Partition, t: f64) -> Result<Estimate<f64>> {
    let norm = inverse_partition_function(t)?;
    let exponent = lambda.conjugate_square_sum() + lambda.size() as u64;
    let mut denom = 1.0;
    for (_, m) in lambda.multiplicities() {
        denom *= t_pochhammer(t, m);
    }
    let w = t.powf(exponent as f64) / denom;
    let ops = (lambda.length() + 4) as f64;
    Ok(Estimate {
        value: norm.value * w,
        error: inflate(norm.error * w + 4.0 * f64::EPSILON * ops * norm.value * w),
    })
}

/// `P(lambda_1 < h) = prod_{k>=1} (1 - t^{(2h+1)k}) (1 - t^{(2h+1)k+1}) (1 - t^{(2h+1)k-1})`.
pub fn principal_cdf_lambda1(h: u32, t: f64) -> Result<Estimate<f64>> {
    check_t(t)?;
    if h == 0 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    let step = 2 * h as i64 + 1;
    let mut value = 1.0;
    let mut k = 1i64;
    let mut factors = 0;
    loop {
        let base = step * k;
        let smallest = t.powf((base - 1) as f64);
        for r in [base - 1, base, base + 1] {
            value *= 1.0 - t.powf(r as f64);
        }
        factors += 3;
        if smallest < 1e-17 {
            break;
        }
        k += 1;
    }
    // every dropped factor has r >= step (k + 1) - 1
    let r0 = (step * (k + 1) - 1) as f64;
    let dropped = 3.0 * t.powf(r0) / ((1.0 - t) * (1.0 - t.powf(step as f64)));
    Ok(Estimate {
        value,
        error: inflate(value * (log_tail_to_relative(dropped) + 4.0 * f64::EPSILON * factors as f64)),
    })
}

/// Largest size for [`principal_cdf_direct`].
pub const DIRECT_SIZE_LIMIT: u32 = 60;

/// `P(lambda_1 < h)` by summing [`principal_prob`] over `|lambda| <= max_size`.
///
/// The dropped mass is at most the deficit `1 - sum_{|lambda| <= max_size} P(lambda)`
/// over all partitions, which is computed alongside.
pub fn principal_cdf_direct(h: u32, t: f64, max_size: u32) -> Result<Estimate<f64>> {
    check_t(t)?;
    check_scale("max |lambda|", max_size as u64, DIRECT_SIZE_LIMIT as u64)?;
    if h == 0 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    let (mut below, mut total) = (0.0, 0.0);
    let mut err = 0.0;
    let mut terms = 0u64;
    for n in 0..=max_size {
        for l in enumerate_partitions(n, n as usize) {
            let p = principal_prob(&l, t)?;
            total += p.value;
            if l.first() < h {
                below += p.value;
                err += p.error;
            }
            terms += 1;
        }
    }
    let rounding = 2.0 * f64::EPSILON * terms as f64;
    let deficit = (1.0 - total).max(0.0) + inverse_partition_function(t)?.error + rounding;
    Ok(Estimate {
        value: below,
        error: inflate(err + deficit + rounding),
    })
}

/// `E(lambda_1) = sum_{h >= 1} P(lambda_1 >= h)`.
///
/// `P(lambda_1 >= h) <= 3 t^{2h} / (1 - t)`, which bounds the dropped terms.
pub fn principal_mean_lambda1(t: f64) -> Result<Estimate<f64>> {
    check_t(t)?;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut h = 1u32;
    loop {
        let cdf = principal_cdf_lambda1(h, t)?;
        value += 1.0 - cdf.value;
        err += cdf.error + f64::EPSILON;
        let next = t.powf(2.0 * (h + 1) as f64);
        if next < 1e-30 || h >= 10_000 {
            break;
        }
        h += 1;
    }
    let tail = 3.0 * t.powf(2.0 * (h + 1) as f64) / ((1.0 - t) * (1.0 - t * t));
    Ok(Estimate {
        value,
        error: inflate(err + tail),
    })
}

/// `M(t, X) = 2 sum_k (1 - t^k) p_k(X)` at `p_k = t^k / (1 - t^k)`, which is `2t / (1 - t)`.
pub fn m_principal(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(2.0 * t / (1.0 - t))
}

/// `E(lambda_1) / M(t, X)`.
pub fn m_ratio(t: f64) -> Result<Estimate<f64>> {
    let e = principal_mean_lambda1(t)?;
    let m = m_principal(t)?;
    Ok(Estimate {
        value: e.value / m,
        error: inflate(e.error / m + 2.0 * f64::EPSILON * e.value / m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_single_box() {
        let t = 0.25;
        let e = principal_prob(&Partition::empty(), t).unwrap();
        let z = inverse_partition_function(t).unwrap();
        assert_eq!(e.value, z.value);
        let one = principal_prob(&Partition::new(vec![1]).unwrap(), t).unwrap();
        assert!((one.value - t * t / (1.0 - t) * z.value).abs() < 1e-16);
        assert!(principal_prob(&Partition::empty(), 1.0).is_err());
    }

    #[test]
    fn mass_and_cdf_agree() {
        let t = 0.25;
        let mut total = 0.0;
        for n in 0..=40 {
            for l in enumerate_partitions(n, n as usize) {
                total += principal_prob(&l, t).unwrap().value;
            }
        }
        assert!((total - 1.0).abs() < 1e-10);
        let direct = principal_cdf_direct(3, t, 40).unwrap();
        let product = principal_cdf_lambda1(3, t).unwrap();
        assert!((direct.value - product.value).abs() <= 1e-10);
        assert!((direct.value - product.value).abs() <= direct.error + product.error);
        // h = 1 is P(empty)
        assert!((principal_cdf_lambda1(1, t).unwrap().value - inverse_partition_function(t).unwrap().value).abs() < 1e-15);
    }

    #[test]
    fn cdf_monotone_and_mean() {
        let t = 0.3;
        let mut prev = 0.0;
        for h in 1..12 {
            let v = principal_cdf_lambda1(h, t).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
        assert!(prev > 1.0 - 1e-9);
        let m = principal_mean_lambda1(0.01).unwrap();
        assert!(((m.value - 1e-4) / 1e-6).abs() <= 10.0, "{m:?}");
        assert_eq!(m_principal(0.5).unwrap(), 2.0);
        assert!(m_ratio(0.01).unwrap().value < m_ratio(0.1).unwrap().value);
    }

    #[test]
    fn m_matches_power_sum_series() {
        let t: f64 = 0.3;
        let s: f64 = (1..200).map(|k| (1.0 - t.powi(k)) * t.powi(k) / (1.0 - t.powi(k))).sum();
        assert!((2.0 * s - m_principal(t).unwrap()).abs() < 1e-14);
    }
}
