//! Partitions, strict partitions, shifted shapes and standard shifted tableaux.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{check_scale, Error, Result};
use crate::scalar::Rational;

/// A weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Trailing zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "{parts:?} is not a weakly decreasing list of positive parts"
            )));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `m_j`, the number of parts equal to `j`.
    pub fn multiplicity(&self, j: u32) -> usize {
        self.parts.iter().filter(|&&p| p == j).count()
    }

    /// `(part, multiplicity)` pairs in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.first() as usize;
        let parts = (1..=first as u32)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// `n(lambda) = sum_j (j - 1) lambda_j`.
    pub fn n_fn(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// `sum_j (lambda'_j)^2`.
    pub fn conjugate_square_sum(&self) -> u64 {
        self.conjugate()
            .parts
            .iter()
            .map(|&c| c as u64 * c as u64)
            .sum()
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A partition with pairwise distinct parts, also read as the finite set of its parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StrictPartition {
    parts: Vec<u32>,
}

impl StrictPartition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "{parts:?} is not a strictly decreasing list of positive parts"
            )));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, k: u32) -> bool {
        self.parts.binary_search_by(|p| k.cmp(p)).is_ok()
    }

    /// Whether every element of `set` is a part.
    pub fn contains_all(&self, set: &[u32]) -> bool {
        set.iter().all(|&k| self.contains(k))
    }

    pub fn to_partition(&self) -> Partition {
        Partition {
            parts: self.parts.clone(),
        }
    }

    pub fn shifted_shape(&self) -> ShiftedShape {
        ShiftedShape {
            rows: self.parts.clone(),
        }
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_partition().fmt(f)
    }
}

/// Young diagram with row `i` shifted right by `i - 1` boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedShape {
    rows: Vec<u32>,
}

impl ShiftedShape {
    pub fn row_lengths(&self) -> &[u32] {
        &self.rows
    }

    /// Cells `(row, column)`, 1-based, with `i <= j <= i + lambda_i - 1`.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, &len)| {
            let row = i as u32 + 1;
            (row..row + len).map(move |col| (row, col))
        })
    }

    pub fn contains(&self, row: u32, col: u32) -> bool {
        row >= 1
            && (row as usize) <= self.rows.len()
            && col >= row
            && col < row + self.rows[row as usize - 1]
    }
}

/// All strict partitions of `n`, ordered lexicographically descending.
pub fn enumerate_strict(n: u32) -> Vec<StrictPartition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    strict_rec(n, n, &mut current, &mut out);
    out
}

fn strict_rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
    if remaining == 0 {
        out.push(StrictPartition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        // parts below p can contribute at most p(p-1)/2
        if (p as u64) * (p as u64 + 1) / 2 < remaining as u64 {
            break;
        }
        current.push(p);
        strict_rec(remaining - p, p - 1, current, out);
        current.pop();
    }
}

/// All partitions of `n` with at most `max_length` parts, lexicographically descending.
pub fn enumerate_partitions(n: u32, max_length: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    partition_rec(n, n, max_length, &mut current, &mut out);
    out
}

fn partition_rec(
    remaining: u32,
    max_part: u32,
    max_length: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    if current.len() == max_length {
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        let slots = (max_length - current.len()) as u64;
        if slots.saturating_mul(p as u64) < remaining as u64 {
            break;
        }
        current.push(p);
        partition_rec(remaining - p, p, max_length, current, out);
        current.pop();
    }
}

/// Largest shape handled by the exhaustive tableau count.
pub const TABLEAU_ORACLE_LIMIT: u32 = 14;

/// Number of standard shifted tableaux of shape `lambda`, by backtracking over
/// every filling with `1..=N`.
pub fn count_shifted_tableaux(lambda: &StrictPartition) -> Result<BigUint> {
    check_scale("|lambda|", lambda.size() as u64, TABLEAU_ORACLE_LIMIT as u64)?;
    let rows = lambda.parts();
    let mut filled = vec![0u32; rows.len()];
    Ok(BigUint::from(fill_next(rows, &mut filled, lambda.size())))
}

fn fill_next(rows: &[u32], filled: &mut [u32], remaining: u32) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut count = 0;
    for i in 0..rows.len() {
        if filled[i] == rows[i] {
            continue;
        }
        // next free cell of row i sits in column i + filled[i]; the cell above it
        // is filled once row i-1 extends two boxes past filled[i]
        if i > 0 && filled[i - 1] < filled[i] + 2 {
            continue;
        }
        filled[i] += 1;
        count += fill_next(rows, filled, remaining - 1);
        filled[i] -= 1;
    }
    count
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `g^lambda = |lambda|! / prod lambda_i! * prod_{i<j} (lambda_i - lambda_j)/(lambda_i + lambda_j)`.
pub fn g_formula(lambda: &StrictPartition) -> Result<BigUint> {
    let parts = lambda.parts();
    let mut value = Rational::from_integer(factorial(lambda.size()));
    for &p in parts {
        value /= Rational::from_integer(factorial(p));
    }
    for (i, &a) in parts.iter().enumerate() {
        for &b in &parts[i + 1..] {
            value *= Rational::new(BigInt::from(a - b), BigInt::from(a + b));
        }
    }
    if !value.is_integer() || value.is_negative() {
        return Err(Error::NonInteger(format!("g^{lambda} evaluated to {value}")));
    }
    value
        .to_integer()
        .to_biguint()
        .ok_or_else(|| Error::NonInteger(format!("g^{lambda} is negative")))
}

/// `g^lambda` as `f64`, for large shapes (log-space free since it is exact up to ~170 boxes).
pub fn g_formula_f64(lambda: &StrictPartition) -> f64 {
    ln_g(lambda).exp()
}

/// `ln g^lambda` evaluated in floating point.
pub fn ln_g(lambda: &StrictPartition) -> f64 {
    let parts = lambda.parts();
    let mut v = ln_factorial(lambda.size());
    for &p in parts {
        v -= ln_factorial(p);
    }
    for (i, &a) in parts.iter().enumerate() {
        for &b in &parts[i + 1..] {
            v += ((a - b) as f64).ln() - ((a + b) as f64).ln();
        }
    }
    v
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    const TABLE_LEN: usize = 256;
    static TABLE: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    if (n as usize) < TABLE_LEN {
        let table = TABLE.get_or_init(|| {
            let mut t = vec![0.0; TABLE_LEN];
            for k in 2..TABLE_LEN {
                t[k] = t[k - 1] + (k as f64).ln();
            }
            t
        });
        return table[n as usize];
    }
    // Stirling series; the first omitted term is below 1e-20 here
    let x = n as f64;
    let r = 1.0 / (x * x);
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r / 1680.0))) / x
}

/// `(sum_{lambda strict, |lambda| = n} 2^{n - l(lambda)} (g^lambda)^2, n!)`.
pub fn verify_factorial_identity(n: u32) -> Result<(BigUint, BigUint)> {
    check_scale("N", n as u64, 20)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let mut lhs = BigUint::zero();
    for lambda in enumerate_strict(n) {
        let g = g_formula(&lambda)?;
        lhs += (BigUint::one() << (n as usize - lambda.length())) * &g * &g;
    }
    let rhs = factorial(n).to_biguint().expect("factorial is positive");
    Ok((lhs, rhs))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_table_meets_stirling() {
        let direct: f64 = (2..=300u32).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(300) - direct).abs() < 1e-10);
        let at_edge: f64 = (2..=256u32).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(256) - at_edge).abs() < 1e-11);
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
    }

    fn sp(parts: &[u32]) -> StrictPartition {
        StrictPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn strict_partitions_of_four() {
        let all = enumerate_strict(4);
        assert_eq!(all, vec![sp(&[4]), sp(&[3, 1])]);
        assert_eq!(enumerate_strict(0), vec![StrictPartition::empty()]);
        assert_eq!(enumerate_strict(10).len(), 10);
    }

    #[test]
    fn rejects_non_strict() {
        assert!(StrictPartition::new(vec![2, 2]).is_err());
        assert!(StrictPartition::new(vec![1, 3]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 2, 0]).unwrap().parts(), &[2, 2]);
    }

    #[test]
    fn shifted_shape_cells() {
        let shape = sp(&[4, 3, 1]).shifted_shape();
        let cells: Vec<_> = shape.cells().collect();
        assert_eq!(cells.len(), 8);
        assert!(cells.contains(&(3, 3)));
        assert!(!shape.contains(2, 1));
        assert!(shape.contains(2, 4));
        assert!(!shape.contains(2, 5));
    }

    #[test]
    fn tableau_counts() {
        assert_eq!(count_shifted_tableaux(&sp(&[4, 3, 1])).unwrap(), BigUint::from(12u32));
        assert_eq!(count_shifted_tableaux(&sp(&[6])).unwrap(), BigUint::from(1u32));
        assert_eq!(count_shifted_tableaux(&sp(&[3, 1])).unwrap(), BigUint::from(2u32));
        assert!(count_shifted_tableaux(&sp(&[15])).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(g_formula(&sp(&[4, 3, 1])).unwrap(), BigUint::from(12u32));
        assert_eq!(g_formula(&sp(&[5])).unwrap(), BigUint::from(1u32));
        assert_eq!(g_formula(&sp(&[3, 1])).unwrap(), BigUint::from(2u32));
        assert_eq!(g_formula(&StrictPartition::empty()).unwrap(), BigUint::from(1u32));
        assert!((g_formula_f64(&sp(&[4, 3, 1])) - 12.0).abs() < 1e-9);
    }

    #[test]
    fn factorial_identity_small() {
        let (l, r) = verify_factorial_identity(4).unwrap();
        assert_eq!(l, BigUint::from(24u32));
        assert_eq!(r, BigUint::from(24u32));
        let (l, r) = verify_factorial_identity(1).unwrap();
        assert_eq!((l, r), (BigUint::from(1u32), BigUint::from(1u32)));
    }

    #[test]
    fn n_function_and_conjugate() {
        let p = Partition::new(vec![4, 2, 2, 1]).unwrap();
        assert_eq!(p.n_fn(), 2 + 4 + 3);
        assert_eq!(p.conjugate().parts(), &[4, 3, 1, 1]);
        assert_eq!(p.multiplicities(), vec![(4, 1), (2, 2), (1, 1)]);
        let sq: u64 = 16 + 9 + 1 + 1;
        assert_eq!(p.conjugate_square_sum(), sq);
    }

    #[test]
    fn bounded_length_partitions() {
        let all = enumerate_partitions(5, 2);
        let parts: Vec<_> = all.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(parts, vec![vec![5], vec![4, 1], vec![3, 2]]);
        assert_eq!(enumerate_partitions(6, usize::MAX).len(), 11);
        assert_eq!(enumerate_partitions(0, 0), vec![Partition::empty()]);
    }
}
