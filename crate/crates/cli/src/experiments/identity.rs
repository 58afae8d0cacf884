use shiftlab::partition::{count_shifted_tableaux, enumerate_strict, g_formula, verify_factorial_identity};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Identity;

const PARAMS: &[ParamSpec] = &[ParamSpec::new("nmax", "12", "largest N, at most 20")];

impl Experiment for Identity {
    fn name(&self) -> &'static str {
        "identity"
    }

    fn about(&self) -> &'static str {
        "Weighted sum of squared shifted tableau counts against N!"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "N      size of the strict partitions summed over\n\
         lhs    sum of 2^(N - l(lambda)) (g^lambda)^2\n\
         rhs    N!\n\
         equal  whether lhs = rhs exactly"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let nmax = cfg.u32("nmax")?;
        if nmax == 0 {
            return Err(CliError::Config("--nmax must be at least 1".into()));
        }
        let mut t = Table::new(&["N", "lhs", "rhs", "equal"]);
        for n in 1..=nmax {
            let (lhs, rhs) = verify_factorial_identity(n)?;
            t.push(vec![n.into(), lhs.to_string().into(), rhs.to_string().into(), (lhs == rhs).into()]);
        }
        Ok(t)
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let mut out = Vec::new();
        let mut bad = Vec::new();
        for n in 1..=9 {
            let (lhs, rhs) = verify_factorial_identity(n)?;
            if lhs != rhs {
                bad.push(n);
            }
        }
        out.push(Check::new("factorial identity N <= 9", bad.is_empty(), format!("failing N {bad:?}")));
        let mut count = 0;
        let mut mismatches = Vec::new();
        for n in 1..=9 {
            for l in enumerate_strict(n) {
                if g_formula(&l)? != count_shifted_tableaux(&l)? {
                    mismatches.push(l.to_string());
                }
                count += 1;
            }
        }
        out.push(Check::new(
            "hook formula vs backtracking",
            mismatches.is_empty(),
            format!("{count} shapes, mismatches {mismatches:?}"),
        ));
        Ok(out)
    }
}
