//! Skew-symmetric matrices and pfaffian engines.
//!
//! Engines implement [`PfaffianEngine`] and live in an [`EngineRegistry`] keyed by
//! name. [`pfaffian`] picks one from the scalar mode and the dimension.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Skew-symmetric matrix storing only the strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix<S> {
    dim: usize,
    upper: Vec<S>,
}

impl<S: Scalar> SkewMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![S::zero(); dim * dim.saturating_sub(1) / 2],
        }
    }

    /// Builds the matrix from `f(i, j)` for `i < j` (0-based).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut upper = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for i in 0..dim {
            for j in i + 1..dim {
                upper.push(f(i, j));
            }
        }
        Self { dim, upper }
    }

    /// Fallible variant of [`SkewMatrix::from_fn`].
    pub fn try_from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Result<S>) -> Result<Self> {
        let mut upper = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for i in 0..dim {
            for j in i + 1..dim {
                upper.push(f(i, j)?);
            }
        }
        Ok(Self { dim, upper })
    }

    /// Reads the strict upper triangle of a dense matrix; the rest is ignored.
    pub fn from_dense_upper(rows: &[Vec<S>]) -> Self {
        Self::from_fn(rows.len(), |i, j| rows[i][j].clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim);
        i * (2 * self.dim - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[self.index(i, j)].clone(),
            Greater => -self.upper[self.index(j, i)].clone(),
            Equal => S::zero(),
        }
    }

    /// Sets entry `(i, j)` and implicitly `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: S) {
        assert!(i != j, "diagonal of a skew matrix is fixed at zero");
        if i < j {
            let k = self.index(i, j);
            self.upper[k] = value;
        } else {
            let k = self.index(j, i);
            self.upper[k] = -value;
        }
    }

    pub fn upper_triangle(&self) -> &[S] {
        &self.upper
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> SkewMatrix<T> {
        SkewMatrix {
            dim: self.dim,
            upper: self.upper.iter().map(f).collect(),
        }
    }
}

/// A pfaffian algorithm.
pub trait PfaffianEngine<S: Scalar>: Send + Sync {
    fn name(&self) -> &'static str;
    fn pfaffian(&self, m: &SkewMatrix<S>) -> Result<S>;
}

/// Recursive expansion along the first row. `(2n-1)!!` terms.
#[derive(Debug, Default, Clone, Copy)]
pub struct Expansion;

/// Fraction-free elimination in the style of Bareiss, two indices per stage.
///
/// Denominators are cleared first when the scalar has them (`Pf(D A) = D^n Pf(A)`),
/// after which every intermediate is an exact multiple of the previous pivot.
#[derive(Debug, Default, Clone, Copy)]
pub struct FractionFree;

/// Parlett-Reid reduction to tridiagonal form with pivoting on the largest entry.
#[derive(Debug, Default, Clone, Copy)]
pub struct ParlettReid;

fn check_even(dim: usize) -> Result<()> {
    if dim % 2 == 1 {
        Err(Error::OddDimension(dim))
    } else {
        Ok(())
    }
}

impl<S: Scalar> PfaffianEngine<S> for Expansion {
    fn name(&self) -> &'static str {
        "expansion"
    }

    fn pfaffian(&self, m: &SkewMatrix<S>) -> Result<S> {
        check_even(m.dim())?;
        let idx: Vec<usize> = (0..m.dim()).collect();
        Ok(expand(m, &idx))
    }
}

fn expand<S: Scalar>(m: &SkewMatrix<S>, idx: &[usize]) -> S {
    if idx.is_empty() {
        return S::one();
    }
    let first = idx[0];
    let mut acc = S::zero();
    let mut rest: Vec<usize> = Vec::with_capacity(idx.len() - 2);
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let a = m.get(first, j);
        if a.is_zero() {
            continue;
        }
        rest.clear();
        rest.extend(idx[1..].iter().copied().filter(|&x| x != j));
        let term = a * expand(m, &rest);
        // k is the 0-based offset of j; offset 1 carries sign +
        if k % 2 == 1 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

impl<S: Scalar> PfaffianEngine<S> for FractionFree {
    fn name(&self) -> &'static str {
        "fraction-free"
    }

    fn pfaffian(&self, m: &SkewMatrix<S>) -> Result<S> {
        check_even(m.dim())?;
        let n = m.dim();
        if n == 0 {
            return Ok(S::one());
        }
        let half = (n / 2) as u32;
        let denom = S::common_denominator(m.upper_triangle()).filter(|d| !d.is_one());
        let mut a = m.to_dense();
        if let Some(d) = &denom {
            for row in a.iter_mut() {
                for v in row.iter_mut() {
                    *v = v.clone() * d.clone();
                }
            }
        }
        let mut negate = false;
        let mut prev = S::one();
        for k in 0..half as usize {
            let (p, q) = (2 * k, 2 * k + 1);
            if a[p][q].is_zero() {
                match (q + 1..n).find(|&j| !a[p][j].is_zero()) {
                    Some(j) => {
                        swap_index(&mut a, q, j);
                        negate = !negate;
                    }
                    None => return Ok(S::zero()),
                }
            }
            if q + 1 == n {
                break;
            }
            let pivot = a[p][q].clone();
            for i in q + 1..n {
                for j in i + 1..n {
                    let v = (pivot.clone() * a[i][j].clone() - a[p][i].clone() * a[q][j].clone()
                        + a[p][j].clone() * a[q][i].clone())
                        / prev.clone();
                    a[j][i] = -v.clone();
                    a[i][j] = v;
                }
            }
            prev = pivot;
        }
        let mut value = a[n - 2][n - 1].clone();
        if negate {
            value = -value;
        }
        if let Some(d) = denom {
            value = value / d.powi(half);
        }
        Ok(value)
    }
}

fn swap_index<S: Clone>(a: &mut [Vec<S>], x: usize, y: usize) {
    a.swap(x, y);
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

impl<S: Scalar> PfaffianEngine<S> for ParlettReid {
    fn name(&self) -> &'static str {
        "parlett-reid"
    }

    fn pfaffian(&self, m: &SkewMatrix<S>) -> Result<S> {
        check_even(m.dim())?;
        let n = m.dim();
        let mut a = m.to_dense();
        let mut pf = S::one();
        let mut k = 0;
        while k + 1 < n {
            let (kp, _) = (k + 1..n)
                .map(|i| (i, a[i][k].magnitude().as_f64()))
                .fold((k + 1, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if kp != k + 1 {
                swap_index(&mut a, k + 1, kp);
                pf = -pf;
            }
            if a[k + 1][k].is_zero() {
                return Ok(S::zero());
            }
            pf = pf * a[k][k + 1].clone();
            if k + 2 < n {
                let pivot = a[k][k + 1].clone();
                let tau: Vec<S> = (k + 2..n).map(|j| a[k][j].clone() / pivot.clone()).collect();
                let col: Vec<S> = (k + 2..n).map(|i| a[i][k + 1].clone()).collect();
                for (ii, i) in (k + 2..n).enumerate() {
                    for (jj, j) in (k + 2..n).enumerate() {
                        if i == j {
                            continue;
                        }
                        let upd = tau[ii].clone() * col[jj].clone() - col[ii].clone() * tau[jj].clone();
                        a[i][j] = a[i][j].clone() + upd;
                    }
                }
            }
            k += 2;
        }
        Ok(pf)
    }
}

/// Name-keyed collection of pfaffian engines.
pub struct EngineRegistry<S: Scalar> {
    engines: BTreeMap<&'static str, Box<dyn PfaffianEngine<S>>>,
}

impl<S: Scalar> EngineRegistry<S> {
    pub fn empty() -> Self {
        Self {
            engines: BTreeMap::new(),
        }
    }

    /// Registry holding `expansion`, `fraction-free` and `parlett-reid`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Expansion));
        r.register(Box::new(FractionFree));
        r.register(Box::new(ParlettReid));
        r
    }

    /// Adds an engine, replacing any engine already registered under its name.
    pub fn register(&mut self, engine: Box<dyn PfaffianEngine<S>>) {
        self.engines.insert(engine.name(), engine);
    }

    pub fn get(&self, name: &str) -> Option<&dyn PfaffianEngine<S>> {
        self.engines.get(name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.engines.keys().copied().collect()
    }

    pub fn pfaffian_with(&self, name: &str, m: &SkewMatrix<S>) -> Result<S> {
        self.get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no pfaffian engine named {name:?}")))?
            .pfaffian(m)
    }
}

/// Largest dimension for which exact mode uses the expansion engine.
pub const EXPANSION_MAX_DIM: usize = 8;

/// Name of the engine [`pfaffian`] uses for this mode and dimension.
pub fn default_engine(mode: Mode, dim: usize) -> &'static str {
    match mode {
        Mode::Exact if dim <= EXPANSION_MAX_DIM => "expansion",
        Mode::Exact => "fraction-free",
        Mode::Approx => "parlett-reid",
    }
}

/// Pfaffian with the default engine for `S`.
pub fn pfaffian<S: Scalar>(m: &SkewMatrix<S>) -> Result<S> {
    check_even(m.dim())?;
    match default_engine(S::MODE, m.dim()) {
        "expansion" => Expansion.pfaffian(m),
        "fraction-free" => FractionFree.pfaffian(m),
        _ => ParlettReid.pfaffian(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use num_traits::Zero;

    fn det_exact(mut a: Vec<Vec<Rational>>) -> Rational {
        let n = a.len();
        let mut det = Rational::from_integer(1.into());
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for r in c + 1..n {
                let f = a[r][c].clone() / a[c][c].clone();
                for k in c..n {
                    let v = a[c][k].clone() * f.clone();
                    a[r][k] -= v;
                }
            }
        }
        det
    }

    fn lcg_matrix(dim: usize, seed: u64) -> SkewMatrix<Rational> {
        let mut s = seed;
        SkewMatrix::from_fn(dim, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = ((s >> 33) % 11) as i64 - 5;
            let den = ((s >> 50) % 4) as i64 + 1;
            rat(num, den)
        })
    }

    #[test]
    fn two_by_two() {
        let m = SkewMatrix::from_fn(2, |_, _| rat(7, 3));
        for name in EngineRegistry::<Rational>::with_builtins().names() {
            let r = EngineRegistry::with_builtins().pfaffian_with(name, &m).unwrap();
            assert_eq!(r, rat(7, 3), "{name}");
        }
    }

    #[test]
    fn four_by_four_classical() {
        // a b c d e f = 2 3 5 7 11 13: af - be + cd
        let vals = [2, 3, 5, 7, 11, 13];
        let mut it = vals.iter();
        let m = SkewMatrix::from_fn(4, |_, _| rat(*it.next().unwrap(), 1));
        let expected = rat(2 * 13 - 3 * 11 + 5 * 7, 1);
        let reg = EngineRegistry::with_builtins();
        for name in reg.names() {
            assert_eq!(reg.pfaffian_with(name, &m).unwrap(), expected, "{name}");
        }
        let mf = m.map(|x| Scalar::as_f64(x));
        assert!((pfaffian(&mf).unwrap() - 28.0).abs() < 1e-12);
    }

    #[test]
    fn square_is_determinant() {
        for dim in [2usize, 4, 6, 8, 10] {
            for seed in 0..4 {
                let m = lcg_matrix(dim, seed * 31 + dim as u64);
                let pf = pfaffian(&m).unwrap();
                assert_eq!(pf.clone() * pf, det_exact(m.to_dense()), "dim {dim}");
            }
        }
    }

    #[test]
    fn engines_agree_including_zero_pivots() {
        let reg = EngineRegistry::<Rational>::with_builtins();
        for dim in [2usize, 4, 6, 8] {
            for seed in 0..6 {
                let mut m = lcg_matrix(dim, seed + 100 * dim as u64);
                if dim > 2 {
                    m.set(0, 1, Rational::zero());
                    m.set(2, 3, Rational::zero());
                }
                let reference = Expansion.pfaffian(&m).unwrap();
                assert_eq!(reg.pfaffian_with("fraction-free", &m).unwrap(), reference);
                assert_eq!(reg.pfaffian_with("parlett-reid", &m).unwrap(), reference);
                let approx = ParlettReid.pfaffian(&m.map(|x| Scalar::as_f64(x))).unwrap();
                assert!((approx - Scalar::as_f64(&reference)).abs() < 1e-9 * (1.0 + approx.abs()));
            }
        }
    }

    #[test]
    fn singular_and_empty() {
        let m = SkewMatrix::<Rational>::zeros(6);
        assert!(pfaffian(&m).unwrap().is_zero());
        assert!(FractionFree.pfaffian(&m).unwrap().is_zero());
        let e = SkewMatrix::<Rational>::zeros(0);
        assert_eq!(pfaffian(&e).unwrap(), rat(1, 1));
        assert_eq!(FractionFree.pfaffian(&e).unwrap(), rat(1, 1));
    }

    #[test]
    fn odd_dimension_rejected() {
        let m = SkewMatrix::<Rational>::zeros(3);
        assert_eq!(pfaffian(&m), Err(Error::OddDimension(3)));
        assert_eq!(FractionFree.pfaffian(&m), Err(Error::OddDimension(3)));
    }

    #[test]
    fn storage_is_antisymmetric() {
        let mut m = SkewMatrix::<Rational>::zeros(4);
        m.set(3, 1, rat(2, 1));
        assert_eq!(m.get(1, 3), rat(-2, 1));
        assert_eq!(m.get(3, 1), rat(2, 1));
        assert!(m.get(2, 2).is_zero());
    }

    #[test]
    fn unknown_engine_is_an_error() {
        let reg = EngineRegistry::<f64>::with_builtins();
        assert!(reg.pfaffian_with("nope", &SkewMatrix::zeros(2)).is_err());
        assert_eq!(reg.names(), vec!["expansion", "fraction-free", "parlett-reid"]);
    }
}
