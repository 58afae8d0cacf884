//! Longest ascent pairs of a permutation.
//!
//! An ascent pair is a decreasing subsequence together with an increasing one such
//! that the largest value of the first is at most the smallest value of the second.
//! Its length is `k + l - 1`; equality of those two values means the subsequences
//! share their first element. Positions of the two subsequences are unrelated.

use std::collections::BTreeMap;

use crate::error::{check_scale, Error, Result};

/// A permutation of `1..=N` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationView {
    values: Vec<u32>,
}

impl PermutationView {
    /// Checks that `values` is a bijection onto `1..=N`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let i = v as usize;
            if i == 0 || i > n || seen[i] {
                return Err(Error::InvalidArgument(format!(
                    "{values:?} is not a permutation of 1..={n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { values })
    }

    /// Values `0..N` shifted to `1..=N`; the caller guarantees a bijection.
    pub(crate) fn from_zero_based_unchecked(mut values: Vec<u32>) -> Self {
        for v in values.iter_mut() {
            *v += 1;
        }
        Self { values }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn reverse(n: usize) -> Self {
        Self {
            values: (1..=n as u32).rev().collect(),
        }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A way of computing `L(pi)`.
pub trait AscentPairAlgorithm: Send + Sync {
    fn name(&self) -> &'static str;
    /// Largest permutation length accepted.
    fn max_len(&self) -> usize;
    fn compute(&self, pi: &PermutationView) -> u32;

    fn longest(&self, pi: &PermutationView) -> Result<u32> {
        check_scale("N", pi.len() as u64, self.max_len() as u64)?;
        Ok(self.compute(pi))
    }
}

/// Enumerates every subsequence, `O(2^N N)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct Exhaustive;

/// Quadratic dynamic program over start positions.
#[derive(Debug, Default, Clone, Copy)]
pub struct QuadraticDp;

/// Fenwick-tree version of the dynamic program, `O(N log N)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct Fast;

impl AscentPairAlgorithm for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn max_len(&self) -> usize {
        9
    }

    fn compute(&self, pi: &PermutationView) -> u32 {
        let p = pi.values();
        let n = p.len();
        if n == 0 {
            return 0;
        }
        // best_de[v]: longest decreasing subsequence whose largest value is v;
        // best_in[v]: longest increasing subsequence whose smallest value is v
        let mut best_de = vec![0u32; n + 1];
        let mut best_in = vec![0u32; n + 1];
        for mask in 1u32..(1 << n) {
            let picked: Vec<u32> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| p[i]).collect();
            let len = picked.len() as u32;
            if picked.windows(2).all(|w| w[0] > w[1]) {
                let top = picked[0] as usize;
                best_de[top] = best_de[top].max(len);
            }
            if picked.windows(2).all(|w| w[0] < w[1]) {
                let bottom = picked[0] as usize;
                best_in[bottom] = best_in[bottom].max(len);
            }
        }
        let mut best = 0;
        for a in 1..=n {
            for b in a..=n {
                best = best.max(best_de[a] + best_in[b] - 1);
            }
        }
        best
    }
}

impl AscentPairAlgorithm for QuadraticDp {
    fn name(&self) -> &'static str {
        "dp"
    }

    fn max_len(&self) -> usize {
        20_000
    }

    fn compute(&self, pi: &PermutationView) -> u32 {
        let p = pi.values();
        let n = p.len();
        if n == 0 {
            return 0;
        }
        let mut dstart = vec![1u32; n];
        let mut istart = vec![1u32; n];
        for i in (0..n).rev() {
            let (pi_v, mut d, mut u) = (p[i], 0u32, 0u32);
            for j in i + 1..n {
                d = d.max(if p[j] < pi_v { dstart[j] } else { 0 });
                u = u.max(if p[j] > pi_v { istart[j] } else { 0 });
            }
            dstart[i] = d + 1;
            istart[i] = u + 1;
        }
        let mut best = 0;
        for i in 0..n {
            let mut cross = istart[i];
            for j in 0..n {
                cross = cross.max(if p[i] < p[j] { istart[j] } else { 0 });
            }
            best = best.max(dstart[i] + cross - 1);
        }
        best
    }
}

/// Prefix-maximum Fenwick tree over `1..=n`.
struct MaxFenwick {
    tree: Vec<u32>,
}

impl MaxFenwick {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![0; n + 1],
        }
    }

    fn update(&mut self, mut i: usize, v: u32) {
        while i < self.tree.len() {
            if self.tree[i] < v {
                self.tree[i] = v;
            }
            i += i & i.wrapping_neg();
        }
    }

    /// Maximum over `1..=i`.
    fn query(&self, mut i: usize) -> u32 {
        let mut best = 0;
        while i > 0 {
            best = best.max(self.tree[i]);
            i &= i - 1;
        }
        best
    }
}

impl AscentPairAlgorithm for Fast {
    fn name(&self) -> &'static str {
        "fast"
    }

    fn max_len(&self) -> usize {
        10_000_000
    }

    fn compute(&self, pi: &PermutationView) -> u32 {
        let p = pi.values();
        let n = p.len();
        if n == 0 {
            return 0;
        }
        // indexed by value
        let mut d_by_value = vec![0u32; n + 1];
        let mut i_by_value = vec![0u32; n + 1];
        let mut below = MaxFenwick::new(n);
        // values mirrored (v -> n + 1 - v) so "larger than" becomes a prefix
        let mut above = MaxFenwick::new(n);
        for &v in p.iter().rev() {
            let v = v as usize;
            let d = below.query(v - 1) + 1;
            let u = above.query(n - v) + 1;
            below.update(v, d);
            above.update(n + 1 - v, u);
            d_by_value[v] = d;
            i_by_value[v] = u;
        }
        let mut best = 0;
        let mut max_d_below = 0u32;
        for w in 1..=n {
            best = best.max(d_by_value[w] + i_by_value[w] - 1);
            if max_d_below > 0 {
                best = best.max(max_d_below + i_by_value[w] - 1);
            }
            max_d_below = max_d_below.max(d_by_value[w]);
        }
        best
    }
}

/// Name-keyed set of [`AscentPairAlgorithm`]s.
pub struct AlgorithmRegistry {
    entries: BTreeMap<&'static str, Box<dyn AscentPairAlgorithm>>,
}

impl AlgorithmRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Registry with `exhaustive`, `dp` and `fast`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Exhaustive));
        r.register(Box::new(QuadraticDp));
        r.register(Box::new(Fast));
        r
    }

    pub fn register(&mut self, algorithm: Box<dyn AscentPairAlgorithm>) {
        self.entries.insert(algorithm.name(), algorithm);
    }

    pub fn get(&self, name: &str) -> Option<&dyn AscentPairAlgorithm> {
        self.entries.get(name).map(|a| a.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn longest_with(&self, name: &str, pi: &PermutationView) -> Result<u32> {
        self.get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no ascent-pair algorithm named {name:?}")))?
            .longest(pi)
    }
}

pub fn longest_ascent_pair_exhaustive(pi: &PermutationView) -> Result<u32> {
    Exhaustive.longest(pi)
}

pub fn longest_ascent_pair_dp(pi: &PermutationView) -> Result<u32> {
    QuadraticDp.longest(pi)
}

pub fn longest_ascent_pair_fast(pi: &PermutationView) -> Result<u32> {
    Fast.longest(pi)
}

/// Calls `f` on every permutation of `1..=n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&PermutationView)) {
    let mut perm = PermutationView::identity(n);
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            perm.values.swap(j, i);
            f(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `h -> #{pi in S_n : L(pi) = h}` by exhaustive enumeration with the given tier.
pub fn census(n: usize, algorithm: &dyn AscentPairAlgorithm) -> Result<BTreeMap<u32, u64>> {
    check_scale("N", n as u64, 10)?;
    check_scale("N", n as u64, algorithm.max_len() as u64)?;
    let mut counts = BTreeMap::new();
    for_each_permutation(n, |pi| *counts.entry(algorithm.compute(pi)).or_insert(0) += 1);
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: [u32; 9] = [4, 7, 1, 9, 6, 3, 5, 8, 2];

    fn all_tiers() -> Vec<Box<dyn AscentPairAlgorithm>> {
        vec![Box::new(Exhaustive), Box::new(QuadraticDp), Box::new(Fast)]
    }

    #[test]
    fn worked_example() {
        let pi = PermutationView::new(EXAMPLE.to_vec()).unwrap();
        for t in all_tiers() {
            assert_eq!(t.longest(&pi).unwrap(), 5, "{}", t.name());
        }
    }

    #[test]
    fn small_cases() {
        let two = PermutationView::new(vec![2, 1]).unwrap();
        let one = PermutationView::new(vec![1]).unwrap();
        let empty = PermutationView::new(vec![]).unwrap();
        for t in all_tiers() {
            assert_eq!(t.longest(&two).unwrap(), 2);
            assert_eq!(t.longest(&one).unwrap(), 1);
            assert_eq!(t.longest(&empty).unwrap(), 0);
            for n in 1..=9 {
                assert_eq!(t.longest(&PermutationView::identity(n)).unwrap(), n as u32);
                assert_eq!(t.longest(&PermutationView::reverse(n)).unwrap(), n as u32);
            }
        }
    }

    #[test]
    fn tiers_agree_on_s6() {
        for_each_permutation(6, |pi| {
            let e = Exhaustive.compute(pi);
            assert_eq!(QuadraticDp.compute(pi), e, "{:?}", pi.values());
            assert_eq!(Fast.compute(pi), e, "{:?}", pi.values());
        });
    }

    #[test]
    fn heap_enumeration_counts() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |pi| {
            seen.insert(pi.values().to_vec());
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn rejects_non_permutations_and_scale() {
        assert!(PermutationView::new(vec![1, 1]).is_err());
        assert!(PermutationView::new(vec![0, 1]).is_err());
        assert!(PermutationView::new(vec![3, 1]).is_err());
        assert!(Exhaustive.longest(&PermutationView::identity(10)).is_err());
        let reg = AlgorithmRegistry::with_builtins();
        assert_eq!(reg.names(), vec!["dp", "exhaustive", "fast"]);
        assert!(reg.longest_with("bogus", &PermutationView::identity(2)).is_err());
    }

    #[test]
    fn census_matches_exact_law_n4() {
        let c = census(4, &Fast).unwrap();
        // 24 * {4: 1/3, 3: 2/3}
        assert_eq!(c.get(&4), Some(&8));
        assert_eq!(c.get(&3), Some(&16));
    }
}
