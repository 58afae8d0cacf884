//! Edge scaling of the exponential (Bessel) kernel towards the Airy kernel.

use serde::{Deserialize, Serialize};

use crate::airy::airy_kernel;
use crate::correlation::{Kernel, KernelSpec};
use crate::error::{check_scale, Error, Result};
use crate::schur_q::PowerSumSpec;

/// Largest `xi` accepted by [`bessel_airy_probe`].
pub const MAX_PROBE_XI: f64 = 1e8;

/// Scaled kernel values at one `(xi, x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitProbe {
    pub xi: f64,
    pub x: f64,
    pub y: f64,
    /// `floor(2 sqrt(2 xi) + x (2 xi)^{1/6})` and the same for `y`.
    pub u: i64,
    pub v: i64,
    /// `(2 xi)^{1/6} K(u, v)`.
    pub plus_plus: f64,
    /// `(2 xi)^{1/6} K(u, -v)`.
    pub plus_minus: f64,
    /// `(2 xi)^{1/6} K(-u, -v)`.
    pub minus_minus: f64,
    /// Largest certified error among the three, after scaling.
    pub error: f64,
    /// `K_Airy(x, y)`.
    pub airy: f64,
}

impl LimitProbe {
    /// `|plus_minus - K_Airy(x, y)|`.
    pub fn mixed_gap(&self) -> f64 {
        (self.plus_minus - self.airy).abs()
    }
}

/// Edge location `2 sqrt(2 xi)` and scale `(2 xi)^{1/6}`.
pub fn edge_scaling(xi: f64) -> (f64, f64) {
    (2.0 * (2.0 * xi).sqrt(), (2.0 * xi).powf(1.0 / 6.0))
}

/// `floor(2 sqrt(2 xi) + x (2 xi)^{1/6})`.
pub fn edge_index(xi: f64, x: f64) -> i64 {
    let (c, s) = edge_scaling(xi);
    (c + x * s).floor() as i64
}

/// Kernel for the exponential specialization at `xi`, deep enough for indices up to `reach`.
pub fn bessel_kernel(xi: f64, reach: i64) -> Result<Kernel<f64>> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
    }
    check_scale("xi", xi.ceil() as u64, MAX_PROBE_XI as u64)?;
    let (c, _) = edge_scaling(xi);
    // J_n(c) is negligible once n >= 2c + O(c^{1/3})
    let order = (2.0 * c + 40.0 * c.cbrt() + 40.0).ceil() as usize + reach.unsigned_abs() as usize;
    let spec = PowerSumSpec::exponential_xi(xi);
    Kernel::new(KernelSpec::new(spec.clone(), spec, order).with_inner_depth(2 * order))
}

/// The three scaled kernel combinations at `(xi, x, y)`.
pub fn bessel_airy_probe(xi: f64, x: f64, y: f64) -> Result<LimitProbe> {
    let u = edge_index(xi, x);
    let v = edge_index(xi, y);
    if u < 1 || v < 1 {
        return Err(Error::InvalidArgument(format!(
            "edge indices ({u}, {v}) at xi = {xi} must be positive"
        )));
    }
    let kernel = bessel_kernel(xi, u.max(v))?;
    probe_with(&kernel, xi, x, y, u, v)
}

fn probe_with(kernel: &Kernel<f64>, xi: f64, x: f64, y: f64, u: i64, v: i64) -> Result<LimitProbe> {
    let (_, s) = edge_scaling(xi);
    let pp = kernel.entry(u, v)?;
    let pm = kernel.entry(u, -v)?;
    let mm = kernel.entry(-u, -v)?;
    Ok(LimitProbe {
        xi,
        x,
        y,
        u,
        v,
        plus_plus: s * pp.value,
        plus_minus: s * pm.value,
        minus_minus: s * mm.value,
        error: s * pp.error.max(pm.error).max(mm.error),
        airy: airy_kernel(x, y)?,
    })
}

/// Probes on the grid `points x points`, sharing one kernel.
pub fn probe_grid(xi: f64, points: &[f64]) -> Result<Vec<LimitProbe>> {
    let idx: Vec<i64> = points.iter().map(|&p| edge_index(xi, p)).collect();
    if let Some(&bad) = idx.iter().find(|&&i| i < 1) {
        return Err(Error::InvalidArgument(format!("edge index {bad} at xi = {xi} must be positive")));
    }
    let reach = idx.iter().copied().max().unwrap_or(1);
    let kernel = bessel_kernel(xi, reach)?;
    let mut out = Vec::with_capacity(points.len() * points.len());
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate() {
            out.push(probe_with(&kernel, xi, x, y, idx[i], idx[j])?);
        }
    }
    Ok(out)
}

/// `(scaled det of the mixed block, det of the Airy block)` at the points `xs`.
pub fn determinant_probe(xi: f64, xs: &[f64; 2]) -> Result<(f64, f64)> {
    let grid = probe_grid(xi, xs)?;
    let m = |i: usize, j: usize| grid[2 * i + j].plus_minus;
    let a = |i: usize, j: usize| grid[2 * i + j].airy;
    Ok((
        m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
        a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_block_approaches_airy() {
        let p = bessel_airy_probe(1e4, 0.0, 0.0).unwrap();
        assert!(p.error < 1e-8, "{p:?}");
        assert!(p.mixed_gap() < 0.1, "{p:?}");
        assert!(bessel_airy_probe(1.0, -5.0, 0.0).is_err());
    }

    #[test]
    fn diagonal_blocks_shrink() {
        let a = bessel_airy_probe(1e3, 0.5, -0.5).unwrap();
        let b = bessel_airy_probe(1e4, 0.5, -0.5).unwrap();
        assert!(b.plus_plus.abs() < a.plus_plus.abs(), "{a:?} {b:?}");
        assert!(b.minus_minus.abs() < a.minus_minus.abs(), "{a:?} {b:?}");
    }
}
