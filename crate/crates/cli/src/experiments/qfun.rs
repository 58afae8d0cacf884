use shiftlab::partition::{enumerate_strict, StrictPartition};
use shiftlab::schur_q::{schur_q, schur_q_genfun_oracle, PowerSumSpec, GENFUN_MAX_LENGTH};
use shiftlab::{rat, Rational};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Qfun;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("lambda", "", "one strict partition such as 3,1; empty tabulates every |lambda| <= nmax"),
    ParamSpec::new("nmax", "6", "largest |lambda| when --lambda is empty, at most 30"),
    ParamSpec::new("vars", "1/2,1/3", "variables, comma separated rationals"),
];

const MAX_NMAX: u64 = 30;

pub(crate) fn parse_strict(raw: &str) -> CliResult<StrictPartition> {
    let parts = raw
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("partition {raw:?}: {e}")))?;
    StrictPartition::new(parts).map_err(|e| CliError::Config(format!("partition {raw:?}: {e}")))
}

impl Experiment for Qfun {
    fn name(&self) -> &'static str {
        "qfun"
    }

    fn about(&self) -> &'static str {
        "Schur Q-functions by pfaffian, checked against coefficient extraction"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "lambda    strict partition\n\
         size      |lambda|\n\
         pfaffian  Q_lambda(vars) from the pfaffian, exact\n\
         oracle    the same from the generating function, exact; empty when l(lambda) > 4\n\
         equal     whether both agree; empty when there is no oracle value"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let vars = cfg.rationals("vars")?;
        let lambdas = match cfg.raw("lambda")?.trim() {
            "" => {
                let nmax = cfg.u64("nmax")?;
                if nmax > MAX_NMAX {
                    return Err(CliError::Scale(format!("--nmax {nmax} exceeds {MAX_NMAX}")));
                }
                (0..=nmax as u32).flat_map(enumerate_strict).collect()
            }
            raw => vec![parse_strict(raw)?],
        };
        let spec = PowerSumSpec::FiniteVars(vars.clone());
        let mut t = Table::new(&["lambda", "size", "pfaffian", "oracle", "equal"]);
        for l in lambdas {
            let pf = schur_q(&l, &spec)?;
            let (oracle, equal) = if l.length() <= GENFUN_MAX_LENGTH && vars.len() <= GENFUN_MAX_LENGTH {
                let gf = schur_q_genfun_oracle(&l, &vars)?;
                let eq = gf == pf;
                (gf.to_string(), eq.to_string())
            } else {
                (String::new(), String::new())
            };
            t.push(vec![l.to_string().into(), l.size().into(), pf.to_string().into(), oracle.into(), equal.into()]);
        }
        Ok(t)
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let sets: [Vec<Rational>; 2] = [vec![rat(1, 2), rat(1, 3)], vec![rat(1, 2), rat(1, 3), rat(1, 5)]];
        let mut out = Vec::new();
        for xs in sets {
            let spec = PowerSumSpec::FiniteVars(xs.clone());
            let mut bad = Vec::new();
            let mut n_cases = 0;
            for n in 0..=7 {
                for l in enumerate_strict(n) {
                    if schur_q(&l, &spec)? != schur_q_genfun_oracle(&l, &xs)? {
                        bad.push(l.to_string());
                    }
                    n_cases += 1;
                }
            }
            let names: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            out.push(Check::new(
                format!("pfaffian vs generating function at ({})", names.join(", ")),
                bad.is_empty(),
                format!("{n_cases} partitions, mismatches {bad:?}"),
            ));
        }
        Ok(out)
    }
}
