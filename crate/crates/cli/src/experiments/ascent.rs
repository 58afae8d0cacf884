use shiftlab::ascent::{census, AlgorithmRegistry, PermutationView};
use shiftlab::plancherel::{exact_lambda1_distribution, poissonized_lambda1_law};
use shiftlab::sampling::{mc_poissonized, mc_scaled_l, SampleRun};
use shiftlab::tracy_widom::f2_cdf;
use shiftlab::{rat, Rational};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Ascent;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("mode", "census", "census, exact, mc or poissonized"),
    ParamSpec::new("n", "8", "permutation length N"),
    ParamSpec::new("samples", "10000", "Monte Carlo sample count"),
    ParamSpec::new("xi", "100", "poissonized mean length"),
    ParamSpec::new("algorithm", "fast", "census algorithm: exhaustive, dp or fast"),
    ParamSpec::new("m", "60", "quadrature order for the F2 column"),
];

const MAX_SAMPLES: u64 = 100_000_000;

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(rat(1, 1), |acc, k| acc * rat(k, 1))
}

fn mc_table(run: &SampleRun, m: usize) -> CliResult<Table> {
    let mut t = Table::new(&["L", "count", "frequency", "scaled", "ecdf", "f2"]);
    let mut cum = 0u64;
    for (&h, &c) in &run.histogram {
        cum += c;
        let s = run.scaled(h);
        // P(L <= h) = P(L < h + 1)
        let right = run.scaled(h + 1);
        t.push(vec![
            h.into(),
            c.into(),
            (c as f64 / run.num_samples as f64).into(),
            s.into(),
            (cum as f64 / run.num_samples as f64).into(),
            f2_cdf(right, m)?.into(),
        ]);
    }
    Ok(t)
}

impl Experiment for Ascent {
    fn name(&self) -> &'static str {
        "ascent"
    }

    fn about(&self) -> &'static str {
        "Longest ascent pair: census, exact law and Monte Carlo"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "--mode census (N <= 10):\n  \
           L            value of the longest ascent pair statistic\n  \
           count        permutations of S_N with that value\n  \
           exact_count  N! P(lambda_1 = L) under the shifted Plancherel measure\n  \
           equal        whether both agree\n\
         --mode exact (N <= 40):\n  \
           L            value\n  \
           probability  P(lambda_1 = L) as an exact fraction\n  \
           approx       the same as a float\n\
         --mode mc and --mode poissonized:\n  \
           L            value\n  \
           count        samples with that value\n  \
           frequency    count / samples\n  \
           scaled       (L - 2 sqrt(2N)) / (2N)^(1/6), N replaced by xi when poissonized\n  \
           ecdf         fraction of samples <= L\n  \
           f2           F2 at the scaled value of L + 1"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let mode = cfg.raw("mode")?;
        match mode {
            "census" => {
                let n = cfg.u32("n")?;
                let registry = AlgorithmRegistry::with_builtins();
                let name = cfg.raw("algorithm")?;
                let algo = registry.get(name).ok_or_else(|| {
                    CliError::Config(format!("unknown --algorithm {name:?}, expected one of {:?}", registry.names()))
                })?;
                let counts = census(n as usize, algo)?;
                let law = exact_lambda1_distribution(n)?;
                let fact = factorial(n);
                let mut t = Table::new(&["L", "count", "exact_count", "equal"]);
                let keys: std::collections::BTreeSet<u32> = counts.keys().chain(law.keys()).copied().collect();
                for h in keys {
                    let c = counts.get(&h).copied().unwrap_or(0);
                    let e = law.get(&h).map(|p| p * &fact).unwrap_or_else(|| Rational::from_integer(0.into()));
                    let equal = e == Rational::from_integer(c.into());
                    t.push(vec![h.into(), c.into(), e.to_string().into(), equal.into()]);
                }
                Ok(t)
            }
            "exact" => {
                let law = exact_lambda1_distribution(cfg.u32("n")?)?;
                let mut t = Table::new(&["L", "probability", "approx"]);
                for (h, p) in law {
                    let approx = shiftlab::Scalar::as_f64(&p);
                    t.push(vec![h.into(), p.to_string().into(), approx.into()]);
                }
                Ok(t)
            }
            "mc" | "poissonized" => {
                let samples = cfg.u64("samples")?;
                if samples == 0 {
                    return Err(CliError::Config("--samples must be positive".into()));
                }
                if samples > MAX_SAMPLES {
                    return Err(CliError::Scale(format!("--samples {samples} exceeds {MAX_SAMPLES}")));
                }
                let seed = cfg.u64("seed")?;
                let run = if mode == "mc" {
                    mc_scaled_l(cfg.u64("n")?, samples, seed)?
                } else {
                    mc_poissonized(cfg.f64("xi")?, samples, seed)?
                };
                mc_table(&run, cfg.usize("m")?)
            }
            other => Err(CliError::Config(format!(
                "unknown --mode {other:?}, expected census, exact, mc or poissonized"
            ))),
        }
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let mut out = Vec::new();
        let registry = AlgorithmRegistry::with_builtins();
        let mut ok = true;
        for n in 1..=7u32 {
            let law = exact_lambda1_distribution(n)?;
            let fact = factorial(n);
            for name in registry.names() {
                let counts = census(n as usize, registry.get(name).expect("listed"))?;
                let as_law: std::collections::BTreeMap<u32, Rational> = counts
                    .iter()
                    .map(|(&h, &c)| (h, Rational::from_integer(c.into()) / &fact))
                    .collect();
                ok &= as_law == law;
            }
        }
        out.push(Check::new("census = N! x exact law, N <= 7, every tier", ok, ""));
        let example = PermutationView::new(vec![4, 7, 1, 9, 6, 3, 5, 8, 2])?;
        let values: Vec<u32> = registry
            .names()
            .iter()
            .map(|name| registry.longest_with(name, &example))
            .collect::<Result<_, _>>()?;
        out.push(Check::new(
            "L(4,7,1,9,6,3,5,8,2) = 5",
            values.iter().all(|&v| v == 5),
            format!("{values:?}"),
        ));
        let law = poissonized_lambda1_law(16.0, 60)?;
        let run = mc_poissonized(16.0, 20_000, 1)?;
        let diff = (run.mean() - law.truncated_mean()).abs();
        let slack = 5.0 * run.standard_error() + law.mean_tail();
        out.push(Check::new(
            "poissonized Monte Carlo mean vs exact law at xi = 16",
            diff <= slack,
            format!("|diff| = {diff:e}, allowed {slack:e}"),
        ));
        Ok(out)
    }
}
