//! Schur Q- and P-functions evaluated at power-sum specializations.

use crate::error::{check_scale, Error, Result};
use crate::partition::StrictPartition;
use crate::pfaffian::{pfaffian, SkewMatrix};
use crate::scalar::Scalar;
use crate::series::{product_form, series_exp, LaurentSeries};

/// A specialization of the symmetric-function variables, described by its power sums.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerSumSpec<S> {
    /// Finitely many variables; `p_k = sum x_i^k`.
    FiniteVars(Vec<S>),
    /// `p_k = p1 * delta_{k,1}`. The Plancherel-type specialization with parameter
    /// `xi` has `p1 = sqrt(xi / 2)`.
    Exponential { p1: S },
    /// `p_k = n alpha^k`, i.e. `n` variables all equal to `alpha`.
    Alpha { n: u32, alpha: S },
    /// `p_k = sum_{j=1..n} t^{jk}`; `n = None` means infinitely many variables.
    Principal { t: S, n: Option<u32> },
    /// Explicit `p_1, p_2, ...`; power sums beyond the list are zero.
    Custom(Vec<S>),
}

impl<S: Scalar> PowerSumSpec<S> {
    pub fn empty() -> Self {
        PowerSumSpec::FiniteVars(Vec::new())
    }

    /// The power sum `p_k`, `k >= 1`.
    pub fn p(&self, k: u32) -> S {
        assert!(k >= 1, "power sums are indexed from 1");
        match self {
            PowerSumSpec::FiniteVars(xs) => xs.iter().fold(S::zero(), |acc, x| acc + x.powi(k)),
            PowerSumSpec::Exponential { p1 } => {
                if k == 1 {
                    p1.clone()
                } else {
                    S::zero()
                }
            }
            PowerSumSpec::Alpha { n, alpha } => S::from_i64(*n as i64) * alpha.powi(k),
            PowerSumSpec::Principal { t, n } => {
                let tk = t.powi(k);
                match n {
                    Some(n) => {
                        // sum_{j=1..n} (t^k)^j, summed directly so t^k = 1 is fine
                        let mut acc = S::zero();
                        let mut pw = S::one();
                        for _ in 0..*n {
                            pw = pw * tk.clone();
                            acc = acc + pw.clone();
                        }
                        acc
                    }
                    None => tk.clone() / (S::one() - tk),
                }
            }
            PowerSumSpec::Custom(ps) => ps.get(k as usize - 1).cloned().unwrap_or_else(S::zero),
        }
    }

    /// Explicit variable list when the specialization has finitely many variables.
    pub fn variables(&self) -> Option<Vec<S>> {
        match self {
            PowerSumSpec::FiniteVars(xs) => Some(xs.clone()),
            PowerSumSpec::Alpha { n, alpha } => Some(vec![alpha.clone(); *n as usize]),
            PowerSumSpec::Principal { t, n: Some(n) } => {
                let mut out = Vec::with_capacity(*n as usize);
                let mut pw = S::one();
                for _ in 0..*n {
                    pw = pw * t.clone();
                    out.push(pw.clone());
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Upper bound `r` with `|p_k| <= C r^k`, used for convergence checks.
    pub fn decay_radius(&self) -> f64 {
        match self {
            PowerSumSpec::FiniteVars(xs) => xs.iter().map(|x| x.magnitude().as_f64()).fold(0.0, f64::max),
            PowerSumSpec::Exponential { .. } | PowerSumSpec::Custom(_) => 0.0,
            PowerSumSpec::Alpha { n, alpha } => {
                if *n == 0 {
                    0.0
                } else {
                    alpha.magnitude().as_f64()
                }
            }
            PowerSumSpec::Principal { t, n } => {
                if *n == Some(0) {
                    0.0
                } else {
                    t.magnitude().as_f64()
                }
            }
        }
    }

    /// Whether every power sum vanishes.
    pub fn is_trivial(&self) -> bool {
        match self {
            PowerSumSpec::FiniteVars(xs) => xs.iter().all(|x| x.is_zero()),
            PowerSumSpec::Exponential { p1 } => p1.is_zero(),
            PowerSumSpec::Alpha { n, alpha } => *n == 0 || alpha.is_zero(),
            PowerSumSpec::Principal { t, n } => *n == Some(0) || t.is_zero(),
            PowerSumSpec::Custom(ps) => ps.iter().all(|p| p.is_zero()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PowerSumSpec::FiniteVars(_) => "finite_vars",
            PowerSumSpec::Exponential { .. } => "exponential",
            PowerSumSpec::Alpha { .. } => "alpha",
            PowerSumSpec::Principal { .. } => "principal",
            PowerSumSpec::Custom(_) => "custom",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PowerSumSpec::Alpha { alpha, .. } if alpha.magnitude() >= S::one() => Err(
                Error::Divergent(format!("alpha = {} must satisfy |alpha| < 1", alpha.as_f64())),
            ),
            PowerSumSpec::Principal { t, n: None } if t.magnitude() >= S::one() => Err(
                Error::Divergent(format!("principal t = {} must satisfy |t| < 1", t.as_f64())),
            ),
            _ => Ok(()),
        }
    }
}

impl PowerSumSpec<f64> {
    /// Exponential specialization with parameter `xi`: `p_1 = sqrt(xi / 2)`.
    pub fn exponential_xi(xi: f64) -> Self {
        PowerSumSpec::Exponential {
            p1: (xi / 2.0).sqrt(),
        }
    }
}

/// `q_0, ..., q_order` with `sum q_n z^n = exp(sum_{n odd} 2 p_n z^n / n)`.
pub fn q_coeffs<S: Scalar>(spec: &PowerSumSpec<S>, order: usize) -> Result<Vec<S>> {
    spec.validate()?;
    let mut a = vec![S::zero(); order + 1];
    for n in (1..=order).step_by(2) {
        a[n] = S::from_i64(2) * spec.p(n as u32) / S::from_i64(n as i64);
    }
    Ok(series_exp(&LaurentSeries::power_series(a)?, order)?.into_coeffs())
}

/// `Q_(r,s)` from `q_0, ..., q_{r+s}`.
pub fn q_rs<S: Scalar>(r: u32, s: u32, q: &[S]) -> Result<S> {
    let need = (r + s) as usize + 1;
    if q.len() < need {
        return Err(Error::InsufficientOrder {
            need,
            have: q.len(),
        });
    }
    if r == s {
        return Ok(S::zero());
    }
    if r < s {
        return Ok(-q_rs(s, r, q)?);
    }
    let (r, s) = (r as usize, s as usize);
    let two = S::from_i64(2);
    let mut acc = q[r].clone() * q[s].clone();
    for i in 1..=s {
        let term = two.clone() * q[r + i].clone() * q[s - i].clone();
        acc = if i % 2 == 1 { acc - term } else { acc + term };
    }
    Ok(acc)
}

/// Parts of `lambda` padded with one zero part when the length is odd.
fn padded_parts(lambda: &StrictPartition) -> Vec<u32> {
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    parts
}

/// The skew matrix `(Q_(lambda_i, lambda_j))` of the padded partition.
pub fn m_lambda<S: Scalar>(lambda: &StrictPartition, q: &[S]) -> Result<SkewMatrix<S>> {
    let parts = padded_parts(lambda);
    SkewMatrix::try_from_fn(parts.len(), |i, j| q_rs(parts[i], parts[j], q))
}

/// Coefficient order needed by [`schur_q_from_coeffs`] for `lambda`.
pub fn required_order(lambda: &StrictPartition) -> usize {
    let p = lambda.parts();
    match p.len() {
        0 => 0,
        1 => p[0] as usize,
        _ => (p[0] + p[1]) as usize,
    }
}

/// `Q_lambda = Pf(M_lambda)` from precomputed `q` coefficients.
pub fn schur_q_from_coeffs<S: Scalar>(lambda: &StrictPartition, q: &[S]) -> Result<S> {
    pfaffian(&m_lambda(lambda, q)?)
}

/// `Q_lambda` at the specialization.
pub fn schur_q<S: Scalar>(lambda: &StrictPartition, spec: &PowerSumSpec<S>) -> Result<S> {
    let q = q_coeffs(spec, required_order(lambda))?;
    schur_q_from_coeffs(lambda, &q)
}

/// `P_lambda = 2^{-l(lambda)} Q_lambda`.
pub fn schur_p<S: Scalar>(lambda: &StrictPartition, spec: &PowerSumSpec<S>) -> Result<S> {
    Ok(schur_q(lambda, spec)? / S::from_i64(2).powi(lambda.length() as u32))
}

/// Largest length handled by the generating-function oracle.
pub const GENFUN_MAX_LENGTH: usize = 4;

/// `Q_lambda(xs)` read off as the coefficient of `z^lambda` in
/// `prod_i Q(z_i) prod_{i<j} (z_i - z_j)/(z_i + z_j)`.
///
/// Each cross factor is expanded as `1 + 2 sum_{k>=1} (-1)^k (z_j/z_i)^k`. The
/// coefficient is independent of the number of `z` variables once it reaches
/// `l(lambda)`, so exactly `l(lambda)` are used. Only finitely many expansion
/// terms can reach `z^lambda`, so the extraction is exact.
pub fn schur_q_genfun_oracle<S: Scalar>(lambda: &StrictPartition, xs: &[S]) -> Result<S> {
    check_scale("l(lambda)", lambda.length() as u64, GENFUN_MAX_LENGTH as u64)?;
    check_scale("number of variables", xs.len() as u64, GENFUN_MAX_LENGTH as u64)?;
    let total = lambda.size() as usize;
    let q = product_form(xs, total, 1)?.into_coeffs();
    let m = lambda.length();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            pairs.push((i, j));
        }
    }
    let mut exps: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    let mut acc = S::zero();
    oracle_rec(&pairs, 0, &mut exps, S::one(), total as i64, &q, &mut acc);
    Ok(acc)
}

// Pair (i, j) with k > 0 moves k units of exponent demand from z_j onto z_i
// (z_i^{-k} z_j^{k} in the expansion must be compensated by Q(z_i) supplying k more).
fn oracle_rec<S: Scalar>(
    pairs: &[(usize, usize)],
    at: usize,
    exps: &mut [i64],
    weight: S,
    total: i64,
    q: &[S],
    acc: &mut S,
) {
    if at == pairs.len() {
        if exps.iter().any(|&e| e < 0) {
            return;
        }
        let mut term = weight;
        for &e in exps.iter() {
            term = term * q[e as usize].clone();
        }
        *acc = acc.clone() + term;
        return;
    }
    let (i, j) = pairs[at];
    let mut k = 0i64;
    loop {
        // exps[i] only grows with k; beyond `total` no term can survive
        if exps[i] + k > total {
            break;
        }
        exps[i] += k;
        exps[j] -= k;
        let w = if k == 0 {
            S::one()
        } else if k % 2 == 1 {
            -S::from_i64(2)
        } else {
            S::from_i64(2)
        };
        // a later pair can only lower exps[j] further if j is its second index
        let j_recoverable = pairs[at + 1..].iter().any(|&(a, _)| a == j);
        if exps[j] >= 0 || j_recoverable {
            oracle_rec(pairs, at + 1, exps, weight.clone() * w, total, q, acc);
        }
        exps[i] -= k;
        exps[j] += k;
        k += 1;
    }
}

/// `Z_SS = sum_lambda Q_lambda(X) P_lambda(Y)`.
///
/// With finitely many variables on both sides this is
/// `prod (1 + x_i y_j)/(1 - x_i y_j)`; otherwise `exp(sum_{n odd} 2 p_n(X) p_n(Y) / n)`,
/// which needs approximate arithmetic unless one side is trivial.
pub fn z_ss<S: Scalar>(x: &PowerSumSpec<S>, y: &PowerSumSpec<S>) -> Result<S> {
    x.validate()?;
    y.validate()?;
    if let (Some(xs), Some(ys)) = (x.variables(), y.variables()) {
        let mut z = S::one();
        for a in &xs {
            for b in &ys {
                let w = a.clone() * b.clone();
                if w.magnitude() >= S::one() {
                    return Err(Error::Divergent(format!(
                        "|x_i y_j| = {} is not below 1",
                        w.magnitude().as_f64()
                    )));
                }
                z = z * (S::one() + w.clone()) / (S::one() - w);
            }
        }
        return Ok(z);
    }
    if x.is_trivial() || y.is_trivial() {
        return Ok(S::one());
    }
    let ratio = x.decay_radius() * y.decay_radius();
    if ratio >= 1.0 {
        return Err(Error::Divergent(format!(
            "power sums decay like {ratio}^n, the exponent sum diverges"
        )));
    }
    let exponent = odd_power_sum_pairing(x, y, ratio);
    exponent
        .exp()
        .ok_or_else(|| Error::Unsupported("Z_SS is transcendental here; use approximate mode".into()))
}

fn odd_power_sum_pairing<S: Scalar>(x: &PowerSumSpec<S>, y: &PowerSumSpec<S>, ratio: f64) -> S {
    let finite_len = |s: &PowerSumSpec<S>| match s {
        PowerSumSpec::Exponential { .. } => Some(1),
        PowerSumSpec::Custom(ps) => Some(ps.len()),
        _ => None,
    };
    let limit = match (finite_len(x), finite_len(y)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        // terms decay like ratio^n; stop once they drop below the last f64 bit
        (None, None) => ((-40.0 / ratio.max(1e-300).ln()).ceil() as usize).max(1) + 2,
    };
    let mut acc = S::zero();
    for n in (1..=limit).step_by(2) {
        acc = acc + S::from_i64(2) * x.p(n as u32) * y.p(n as u32) / S::from_i64(n as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_strict, g_formula};
    use crate::scalar::{rat, Rational};
    use num_traits::{One, Zero};

    fn sp(parts: &[u32]) -> StrictPartition {
        StrictPartition::new(parts.to_vec()).unwrap()
    }

    fn vars(v: &[(i64, i64)]) -> PowerSumSpec<Rational> {
        PowerSumSpec::FiniteVars(v.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn one_variable_coefficients() {
        let x = rat(2, 7);
        let q = q_coeffs(&PowerSumSpec::FiniteVars(vec![x.clone()]), 8).unwrap();
        assert!(q[0].is_one());
        for (n, qn) in q.iter().enumerate().skip(1) {
            assert_eq!(*qn, rat(2, 1) * x.powi(n as u32));
        }
    }

    #[test]
    fn exponential_coefficients() {
        let p1 = rat(3, 4);
        let q = q_coeffs(&PowerSumSpec::Exponential { p1: p1.clone() }, 7).unwrap();
        let mut fact = Rational::one();
        for (n, qn) in q.iter().enumerate() {
            if n > 0 {
                fact *= rat(n as i64, 1);
            }
            assert_eq!(*qn, (rat(2, 1) * p1.clone()).powi(n as u32) / fact.clone());
        }
    }

    #[test]
    fn power_sums_of_kinds() {
        let t = rat(1, 3);
        let prin = PowerSumSpec::Principal { t: t.clone(), n: Some(4) };
        let fv = PowerSumSpec::FiniteVars(prin.variables().unwrap());
        let inf = PowerSumSpec::Principal { t: t.clone(), n: None };
        for k in 1..=10 {
            assert_eq!(prin.p(k), fv.p(k));
            let tk = t.powi(k);
            assert_eq!(prin.p(k), tk.clone() * (Rational::one() - tk.powi(4)) / (Rational::one() - tk.clone()));
            assert_eq!(inf.p(k), tk.clone() / (Rational::one() - tk));
        }
        let alpha = PowerSumSpec::Alpha { n: 3, alpha: rat(1, 5) };
        assert_eq!(alpha.p(2), rat(3, 25));
        assert_eq!(PowerSumSpec::Custom(vec![rat(1, 2)]).p(3), Rational::zero());
    }

    #[test]
    fn q_rs_examples() {
        let q = q_coeffs(&vars(&[(1, 3)]), 6).unwrap();
        assert!(q_rs(2, 2, &q).unwrap().is_zero());
        assert!(q_rs(2, 1, &q).unwrap().is_zero());
        let spec = vars(&[(1, 2), (1, 3)]);
        let q = q_coeffs(&spec, 6).unwrap();
        let (x, y) = (rat(1, 2), rat(1, 3));
        assert_eq!(q_rs(2, 1, &q).unwrap(), rat(4, 1) * x.clone() * y.clone() * (x + y));
        assert_eq!(q_rs(1, 2, &q).unwrap(), -q_rs(2, 1, &q).unwrap());
        assert_eq!(
            q_rs(5, 1, &q[..3]),
            Err(Error::InsufficientOrder { need: 7, have: 3 })
        );
    }

    #[test]
    fn schur_q_examples() {
        let spec = vars(&[(1, 2), (1, 3)]);
        let q = q_coeffs(&spec, 8).unwrap();
        assert_eq!(schur_q(&sp(&[5]), &spec).unwrap(), q[5]);
        assert_eq!(schur_q(&sp(&[2, 1]), &spec).unwrap(), rat(5, 9));
        assert_eq!(schur_p(&sp(&[2, 1]), &spec).unwrap(), rat(5, 36));
        assert_eq!(schur_p(&sp(&[3]), &spec).unwrap(), q[3].clone() / rat(2, 1));
        assert!(schur_p(&StrictPartition::empty(), &spec).unwrap().is_one());
    }

    #[test]
    fn exponential_matches_tableau_count() {
        let p1 = rat(2, 5);
        let spec = PowerSumSpec::Exponential { p1: p1.clone() };
        let s = rat(2, 1) * p1; // sqrt(2 xi)
        let lam = sp(&[3, 1]);
        let expect = s.powi(4) * rat(2, 24);
        assert_eq!(schur_q(&lam, &spec).unwrap(), expect);
    }

    #[test]
    fn oracle_examples() {
        let x = [rat(1, 3)];
        assert_eq!(schur_q_genfun_oracle(&sp(&[4]), &x).unwrap(), rat(2, 81));
        let xy = [rat(1, 2), rat(1, 3)];
        assert_eq!(schur_q_genfun_oracle(&sp(&[2, 1]), &xy).unwrap(), rat(5, 9));
        let xyz = [rat(1, 2), rat(1, 3), rat(1, 5)];
        let lam = sp(&[3, 2, 1]);
        assert_eq!(
            schur_q_genfun_oracle(&lam, &xyz).unwrap(),
            schur_q(&lam, &PowerSumSpec::FiniteVars(xyz.to_vec())).unwrap()
        );
        // longer than the variable list: genuinely zero
        assert!(schur_q_genfun_oracle(&sp(&[2, 1]), &x).unwrap().is_zero());
        assert!(schur_q_genfun_oracle(&sp(&[5, 4, 3, 2, 1]), &xyz).is_err());
    }

    #[test]
    fn oracle_agrees_with_pfaffian_small() {
        let xs = [rat(1, 2), rat(1, 5)];
        for n in 0..=7 {
            for lam in enumerate_strict(n) {
                assert_eq!(
                    schur_q_genfun_oracle(&lam, &xs).unwrap(),
                    schur_q(&lam, &PowerSumSpec::FiniteVars(xs.to_vec())).unwrap(),
                    "{lam}"
                );
            }
        }
    }

    #[test]
    fn z_ss_examples() {
        assert_eq!(z_ss(&vars(&[(1, 2)]), &vars(&[(1, 3)])).unwrap(), rat(7, 5));
        assert!(z_ss(&vars(&[(1, 2)]), &PowerSumSpec::empty()).unwrap().is_one());
        let e = PowerSumSpec::exponential_xi(3.0);
        assert!((z_ss(&e, &e).unwrap() - 3f64.exp()).abs() < 1e-12);
        assert!(z_ss(&vars(&[(3, 2)]), &vars(&[(3, 4)])).is_err());
        let exact_e = PowerSumSpec::Exponential { p1: rat(1, 2) };
        assert!(matches!(z_ss(&exact_e, &exact_e), Err(Error::Unsupported(_))));
        // infinite principal pair vs product over truncated variable lists
        let t = 0.3;
        let inf = PowerSumSpec::Principal { t, n: None };
        let fin = PowerSumSpec::Principal { t, n: Some(60) };
        assert!((z_ss(&inf, &inf).unwrap() - z_ss(&fin, &fin).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn exponential_identity_general() {
        let p1 = rat(1, 3);
        let spec = PowerSumSpec::Exponential { p1: p1.clone() };
        let s = rat(2, 1) * p1;
        for n in 1..=8u32 {
            let fact: Rational = (1..=n).fold(Rational::one(), |a, k| a * rat(k as i64, 1));
            for lam in enumerate_strict(n) {
                let g = Rational::from_integer(g_formula(&lam).unwrap().into());
                assert_eq!(schur_q(&lam, &spec).unwrap(), s.powi(n) * g / fact.clone());
            }
        }
    }
}
