//! The Airy function, its derivative, and the Airy kernel.
//!
//! For `|x| <= 7` the Maclaurin series is summed in double-double arithmetic,
//! which absorbs the cancellation between its two halves. Beyond that the
//! standard asymptotic expansions take over.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Switch point between the Maclaurin and asymptotic routes.
pub const X_SWITCH: f64 = 7.0;

/// Most negative argument accepted.
pub const X_MIN: f64 = -40.0;

/// Below this separation [`airy_kernel`] uses its diagonal value.
pub const DIAGONAL_GAP: f64 = 1e-6;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let p = q1 * d;
        let perr = q1.mul_add(d, -p);
        let (s, e) = two_sum(self.hi, -p);
        let r = (s + (e - perr + self.lo)) / d;
        let (hi, lo) = quick_two_sum(q1, r);
        Self { hi, lo }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// `Ai(0)` and `-Ai'(0)`.
const C1: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const C2: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

/// Sums `sum_k term_k` where `term_{k+1} = term_k * x^3 / (a(k) b(k))`.
fn hyper_sum(first: Dd, x3: Dd, denoms: impl Fn(f64) -> (f64, f64)) -> Dd {
    let mut term = first;
    let mut sum = first;
    let mut scale = first.hi.abs();
    for k in 0..200 {
        let (a, b) = denoms(k as f64);
        term = term.mul(x3).div_f64(a * b);
        sum = sum.add(term);
        scale = scale.max(sum.hi.abs());
        if term.hi.abs() <= 1e-34 * scale {
            break;
        }
    }
    sum
}

fn maclaurin(x: f64) -> (f64, f64) {
    let xd = Dd::from(x);
    let x3 = xd.mul(xd).mul(xd);
    let f = hyper_sum(Dd::from(1.0), x3, |k| (3.0 * k + 2.0, 3.0 * k + 3.0));
    let g = hyper_sum(xd, x3, |k| (3.0 * k + 3.0, 3.0 * k + 4.0));
    let ai = C1.mul(f).add(C2.mul(g).neg());
    let fp = if x == 0.0 {
        Dd::from(0.0)
    } else {
        // first term k = 1 is x^2/2; the ratio uses (3k)(3k+2) with k starting at 1
        hyper_sum(xd.mul(xd).div_f64(2.0), x3, |k| (3.0 * (k + 1.0), 3.0 * (k + 1.0) + 2.0))
    };
    let gp = hyper_sum(Dd::from(1.0), x3, |k| (3.0 * k + 1.0, 3.0 * k + 3.0));
    let aip = C1.mul(fp).add(C2.mul(gp).neg());
    (ai.to_f64(), aip.to_f64())
}

/// Coefficients `u_k` and `v_k` of the asymptotic expansions, reduced by `zeta^k`.
fn asymptotic_terms(zeta: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(1.0, 1.0)];
    let mut u = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf) / zeta;
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let size = u.abs().max(v.abs());
        // stop at the smallest term of the divergent series
        if size > prev || size < 1e-18 {
            break;
        }
        prev = size;
        out.push((u, v));
    }
    out
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (mut su, mut sv) = (0.0, 0.0);
    for (k, &(u, v)) in asymptotic_terms(zeta).iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * u;
        sv += sign * v;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * su, -e * q * sv)
}

fn asymptotic_negative(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    for (k, &(u, v)) in asymptotic_terms(zeta).iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pu += sign * u;
            pv += sign * v;
        } else {
            qu += sign * u;
            qv += sign * v;
        }
    }
    let theta = zeta - PI / 4.0;
    let (s, c) = theta.sin_cos();
    let q = z.powf(0.25);
    let ai = (c * pu + s * qu) / (PI.sqrt() * q);
    let aip = q * (s * pv - c * qv) / PI.sqrt();
    (ai, aip)
}

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(Error::InvalidArgument("Airy argument is NaN".into()));
    }
    if x < X_MIN {
        return Err(Error::InvalidArgument(format!(
            "Airy argument {x} is below {X_MIN}"
        )));
    }
    Ok(airy_unchecked(x))
}

pub(crate) fn airy_unchecked(x: f64) -> (f64, f64) {
    if x.abs() <= X_SWITCH {
        maclaurin(x)
    } else if x > 0.0 {
        if x > 1e4 {
            return (0.0, -0.0);
        }
        asymptotic_positive(x)
    } else {
        asymptotic_negative(x)
    }
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy(x).map(|v| v.0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy(x).map(|v| v.1)
}

/// Both routes at `x`, for checking their overlap: `(maclaurin, asymptotic)`.
pub fn airy_routes(x: f64) -> ((f64, f64), (f64, f64)) {
    let asym = if x >= 0.0 { asymptotic_positive(x) } else { asymptotic_negative(x) };
    (maclaurin(x), asym)
}

/// `(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let (ax, apx) = airy(x)?;
    if (x - y).abs() < DIAGONAL_GAP {
        let m = 0.5 * (x + y);
        let (a, ap) = airy(m)?;
        return Ok(ap * ap - m * a * a);
    }
    let (ay, apy) = airy(y)?;
    Ok((ax * apy - apx * ay) / (x - y))
}

/// Kernel from precomputed `(Ai, Ai')` pairs.
pub(crate) fn airy_kernel_from(x: f64, vx: (f64, f64), y: f64, vy: (f64, f64)) -> f64 {
    if (x - y).abs() < DIAGONAL_GAP {
        vx.1 * vy.1 - x * vx.0 * vy.0
    } else {
        (vx.0 * vy.1 - vx.1 * vy.0) / (x - y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, Ai, Ai') to 20 digits
    const TABLE: [(f64, f64, f64); 14] = [
        (-40.0, -0.045933923437957249632, -1.389090875260718381),
        (-20.0, -0.17640612707798468959, 0.8928628567364712384),
        (-10.0, 0.040241238486443190689, 0.9962650441327900559),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (-3.0, -0.37881429367765807435, 0.31458376921659881365),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.5, 0.015725923380470489995, -0.026250881035903230365),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (9.0, 2.4711684308724898433e-9, -7.4806413896589464128e-9),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
        (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
    ];

    #[test]
    fn reference_values() {
        for &(x, ai, aip) in &TABLE {
            let (a, b) = airy(x).unwrap();
            assert!((a - ai).abs() <= 1e-11 * ai.abs(), "Ai({x}) = {a} vs {ai}");
            assert!((b - aip).abs() <= 1e-11 * aip.abs(), "Ai'({x}) = {b} vs {aip}");
        }
        assert!(airy(-41.0).is_err());
        assert!(airy_ai(10.0).unwrap() < 1e-9);
    }

    #[test]
    fn routes_agree_on_overlap() {
        for i in 0..=20 {
            let x = 7.0 + i as f64 * 0.1;
            for x in [x, -x] {
                let ((a1, p1), (a2, p2)) = airy_routes(x);
                let scale = if x > 0.0 { a1.abs() } else { 1.0 / x.abs().powf(0.25) };
                let pscale = if x > 0.0 { p1.abs() } else { x.abs().powf(0.25) };
                assert!((a1 - a2).abs() <= 1e-10 * scale, "x={x}: {a1} vs {a2}");
                assert!((p1 - p2).abs() <= 1e-10 * pscale, "x={x}: {p1} vs {p2}");
            }
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 5e-3;
        let mut x = -10.0;
        while x <= 5.0 {
            let f = |t: f64| airy_ai(t).unwrap();
            let second = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h)
                - f(x - 2.0 * h))
                / (12.0 * h * h);
            assert!((second - x * f(x)).abs() < 1e-8, "x={x}");
            // derivative by central differences
            let d = (f(x + 1e-4) - f(x - 1e-4)) / 2e-4;
            assert!((d - airy_ai_prime(x).unwrap()).abs() < 1e-6, "x={x}: {d} vs {}", airy_ai_prime(x).unwrap());
            x += 0.37;
        }
    }

    #[test]
    fn kernel_symmetry_and_diagonal() {
        for &(x, y) in &[(0.3, -1.2), (2.0, 1.5), (-4.0, 0.0)] {
            assert!((airy_kernel(x, y).unwrap() - airy_kernel(y, x).unwrap()).abs() < 1e-15);
        }
        for i in 0..20 {
            let x = -6.0 + 0.4 * i as f64;
            let d = airy_kernel(x, x).unwrap();
            assert!(d > 0.0);
            let near = airy_kernel(x, x + 1e-4).unwrap();
            assert!((d - near).abs() < 1e-4);
        }
    }
}
