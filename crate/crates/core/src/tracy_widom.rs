//! The GUE Tracy-Widom distribution `F_2` as a Fredholm determinant of the Airy
//! kernel, discretized by Nyström's method.
//!
//! `[s, inf)` is reached from `[-1, 1]` through `x = s + c (1 + t) / (1 - t)`;
//! the Jacobian is folded into the weights.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::airy::{airy_kernel_from, airy_unchecked};
use crate::error::{Error, Result};

/// Scale `c` of the default transform.
pub const DEFAULT_MAP_SCALE: f64 = 4.0;

/// Smallest accepted `s`.
pub const S_MIN: f64 = -12.0;

/// Smallest accepted quadrature order.
pub const MIN_ORDER: usize = 20;

/// Gauss-Legendre nodes on `[-1, 1]`, increasing, with their weights.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature on `[s, inf)` from a mapped Gauss-Legendre rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub reference_nodes: Vec<f64>,
    pub reference_weights: Vec<f64>,
    pub s: f64,
    pub map_scale: f64,
}

impl QuadratureRule {
    pub fn new(s: f64, order: usize, map_scale: f64) -> Result<Self> {
        if !(map_scale > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad transform: s = {s}, c = {map_scale}"
            )));
        }
        let (reference_nodes, reference_weights) = gauss_legendre(order);
        Ok(Self {
            order,
            reference_nodes,
            reference_weights,
            s,
            map_scale,
        })
    }

    /// `t -> s + c (1 + t) / (1 - t)`.
    pub fn transform(&self, t: f64) -> f64 {
        self.s + self.map_scale * (1.0 + t) / (1.0 - t)
    }

    pub fn transform_derivative(&self, t: f64) -> f64 {
        2.0 * self.map_scale / ((1.0 - t) * (1.0 - t))
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.reference_nodes.iter().map(|&t| self.transform(t)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.reference_nodes
            .iter()
            .zip(&self.reference_weights)
            .map(|(&t, &w)| w * self.transform_derivative(t))
            .collect()
    }

    /// `int_s^inf f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes().iter().zip(self.weights()).map(|(&x, w)| w * f(x)).sum()
    }
}

/// Value of `F_2` with the self-convergence estimate `|F(m) - F(2m)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F2Value {
    pub value: f64,
    pub error: f64,
}

/// `det(I - K_Airy)` on `L^2([s, inf))` with an `m`-point rule.
pub fn f2_at_order(s: f64, m: usize) -> Result<f64> {
    if !(s >= S_MIN) {
        return Err(Error::InvalidArgument(format!("s = {s} is below {S_MIN}")));
    }
    if m < MIN_ORDER {
        return Err(Error::InvalidArgument(format!(
            "quadrature order {m} is below {MIN_ORDER}"
        )));
    }
    let rule = QuadratureRule::new(s, m, DEFAULT_MAP_SCALE)?;
    let x = rule.nodes();
    let w: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let ai: Vec<(f64, f64)> = x.iter().map(|&t| airy_unchecked(t)).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    let k = w[i] * w[j] * airy_kernel_from(x[i], ai[i], x[j], ai[j]);
                    if i == j {
                        1.0 - k
                    } else {
                        -k
                    }
                })
                .collect()
        })
        .collect();
    let det = DMatrix::from_fn(m, m, |i, j| rows[i][j]).determinant();
    if !det.is_finite() {
        return Err(Error::Numerical(format!("F2({s}) determinant is {det}")));
    }
    Ok(det)
}

/// `F_2(s)` at order `m`, with `|F(m) - F(2m)|` as the error.
pub fn f2(s: f64, m: usize) -> Result<F2Value> {
    let value = f2_at_order(s, m)?;
    let fine = f2_at_order(s, 2 * m)?;
    Ok(F2Value {
        value,
        error: (value - fine).abs(),
    })
}

/// `F_2` without the convergence check, clamped to `[0, 1]`.
pub fn f2_cdf(s: f64, m: usize) -> Result<f64> {
    if s < S_MIN {
        return Ok(0.0);
    }
    Ok(f2_at_order(s, m)?.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_exactness() {
        for m in [1, 2, 5, 20, 81] {
            let (x, w) = gauss_legendre(m);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|&v| v > 0.0));
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = (2 * m - 1).min(30) as i32;
            let int: f64 = x.iter().zip(&w).map(|(a, b)| b * a.powi(deg - deg % 2)).sum();
            let exact = 2.0 / (deg - deg % 2 + 1) as f64;
            assert!((int - exact).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn transformed_rule_integrates_exponential() {
        let r = QuadratureRule::new(-1.0, 60, DEFAULT_MAP_SCALE).unwrap();
        let v = r.integrate(|x| (-x).exp());
        assert!((v - 1f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn tails_and_monotone() {
        assert!(f2(8.0, 40).unwrap().value >= 1.0 - 1e-8);
        let left = f2(-9.0, 80).unwrap();
        assert!(left.value.abs() < 1e-4);
        let mut prev = 0.0;
        for i in 0..=16 {
            let v = f2_at_order(-8.0 + 0.75 * i as f64, 40).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        // reference value F_2(-2) = 0.41322414250512257...
        assert!((f2_at_order(-2.0, 60).unwrap() - 0.413_224_142_505_122_6).abs() < 1e-10);
        assert!(f2(0.0, 10).is_err());
        assert!(f2(-13.0, 40).is_err());
    }
}
