//! Bessel functions of the first kind at integer order.

/// `J_0(x), ..., J_nmax(x)` by downward recurrence, normalized with
/// `J_0^2 + 2 sum_{n>=1} J_n^2 = 1`.
pub fn bessel_j_table(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = (nmax as f64).max(ax);
    let mut start = (top + 20.0 + (60.0 * top).sqrt()).ceil() as usize;
    start += start % 2;
    let mut next = 0.0f64; // J_{k+1}
    let mut cur = 1e-30f64; // J_k
    let mut squares = 0.0f64;
    let mut linear = 0.0f64;
    for k in (1..=start).rev() {
        // J_{k-1} = (2k / x) J_k - J_{k+1}
        let prev = 2.0 * k as f64 / ax * cur - next;
        if k <= nmax {
            out[k] = cur;
        }
        squares += 2.0 * cur * cur;
        if k % 2 == 0 {
            linear += 2.0 * cur;
        }
        next = cur;
        cur = prev;
        if cur.abs() > 1e100 {
            let s = 1e-100;
            cur *= s;
            next *= s;
            squares *= s * s;
            linear *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    squares += cur * cur;
    linear += cur;
    let norm = squares.sqrt().copysign(linear);
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// `J_n(x)` for an integer order of either sign.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let table = bessel_j_table(n.unsigned_abs() as usize, x);
    let v = table[n.unsigned_abs() as usize];
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Upper bound on `|J_n(x)|`: `min(1, (|x|/2)^|n| / |n|!)`.
pub fn bessel_j_bound(n: i64, x: f64) -> f64 {
    let n = n.unsigned_abs();
    if n == 0 {
        return 1.0;
    }
    let half = x.abs() / 2.0;
    if half == 0.0 {
        return 0.0;
    }
    let ln = n as f64 * half.ln() - crate::partition::ln_factorial(n.min(u32::MAX as u64) as u32);
    ln.exp().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ascending(n: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for m in 1..200 {
            term *= -half * half / (m as f64 * (m + n) as f64);
            sum += term;
            if term.abs() < 1e-30 {
                break;
            }
        }
        sum
    }

    #[test]
    fn matches_ascending_series() {
        for &x in &[0.1, 0.5, 1.0, 2.5, 4.0, 7.3, 10.0, -3.0] {
            let t = bessel_j_table(30, x);
            for n in 0..=30u32 {
                let a = if x < 0.0 && n % 2 == 1 { -ascending(n, -x) } else { ascending(n, x.abs()) };
                assert!((t[n as usize] - a).abs() < 1e-13, "n={n} x={x}: {} vs {a}", t[n as usize]);
            }
        }
    }

    #[test]
    fn known_values() {
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(0, 100.0) - 0.019_985_850_304_223_122).abs() < 1e-14);
        assert!((bessel_j(100, 100.0) - 0.096_366_673_295_861_56).abs() < 1e-14);
        assert_eq!(bessel_j(-3, 2.0), -bessel_j(3, 2.0));
        assert_eq!(bessel_j(5, 0.0), 0.0);
        assert_eq!(bessel_j(0, 0.0), 1.0);
    }

    #[test]
    fn large_argument_identity() {
        let x = 2000.0;
        let t = bessel_j_table(2400, x);
        let lin: f64 = t[0] + 2.0 * t.iter().skip(2).step_by(2).sum::<f64>();
        assert!((lin - 1.0).abs() < 1e-10);
        for n in 0..2400 {
            assert!(t[n].abs() <= bessel_j_bound(n as i64, x) + 1e-14);
        }
    }
}
