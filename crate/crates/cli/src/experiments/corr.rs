use shiftlab::correlation::{BruteForceTable, CorrelationQuery, Kernel, KernelSpec};
use shiftlab::schur_q::PowerSumSpec;
use shiftlab::{rat, Rational, Scalar};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Corr;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("a", "1;2;1,2;1,2,3", "sets A, elements comma separated, sets separated by ;"),
    ParamSpec::new("x", "1/10,1/20", "X variables"),
    ParamSpec::new("y", "1/10,1/20", "Y variables"),
    ParamSpec::new("order", "40", "kernel truncation order, at most 400"),
    ParamSpec::new("cutoff", "24", "largest |lambda| in the brute-force sum, at most 40"),
];

const MAX_ORDER: u64 = 400;
const MAX_CUTOFF: u64 = 40;

fn parse_sets(raw: &str) -> CliResult<Vec<CorrelationQuery>> {
    raw.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let ks = s
                .split(',')
                .map(|k| k.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(format!("--a {s:?}: {e}")))?;
            CorrelationQuery::new(ks).map_err(|e| CliError::Config(format!("--a {s:?}: {e}")))
        })
        .collect()
}

fn set_label(q: &CorrelationQuery) -> String {
    let parts: Vec<String> = q.elements().iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// `(label, pfaffian, pfaffian error, brute force, brute-force tail, gap)` per set.
type Row = (String, f64, f64, f64, f64, f64);

fn compare(x: Vec<Rational>, y: Vec<Rational>, order: usize, cutoff: u32, sets: &[CorrelationQuery]) -> CliResult<Vec<Row>> {
    let (x, y) = (PowerSumSpec::FiniteVars(x), PowerSumSpec::FiniteVars(y));
    let table = BruteForceTable::new(&x, &y, cutoff)?;
    let kernel = Kernel::new(KernelSpec::new(x, y, order))?;
    sets.iter()
        .map(|q| {
            let pf = kernel.rho(q)?;
            let bf = table.rho(q);
            let gap = (pf.value.clone() - bf.value.clone()).magnitude().as_f64();
            Ok((set_label(q), pf.value.as_f64(), pf.error, bf.value.as_f64(), bf.error, gap))
        })
        .collect()
}

impl Experiment for Corr {
    fn name(&self) -> &'static str {
        "corr"
    }

    fn about(&self) -> &'static str {
        "Correlation functions by pfaffian against brute-force summation"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "A                the set, as {k1,...}\n\
         pfaffian         rho(A) from the kernel pfaffian\n\
         pfaffian_error   certified bound on its truncation error\n\
         bruteforce       rho(A) summed over |lambda| <= cutoff\n\
         bruteforce_tail  certified bound on the omitted weight\n\
         gap              |pfaffian - bruteforce|, computed exactly\n\
         within           whether gap <= pfaffian_error + bruteforce_tail"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let sets = parse_sets(cfg.raw("a")?)?;
        let order = cfg.u64("order")?;
        let cutoff = cfg.u64("cutoff")?;
        if order > MAX_ORDER {
            return Err(CliError::Scale(format!("--order {order} exceeds {MAX_ORDER}")));
        }
        if cutoff > MAX_CUTOFF {
            return Err(CliError::Scale(format!("--cutoff {cutoff} exceeds {MAX_CUTOFF}")));
        }
        let rows = compare(cfg.rationals("x")?, cfg.rationals("y")?, order as usize, cutoff as u32, &sets)?;
        let mut t = Table::new(&["A", "pfaffian", "pfaffian_error", "bruteforce", "bruteforce_tail", "gap", "within"]);
        for (label, pf, pe, bf, bt, gap) in rows {
            t.push(vec![label.into(), pf.into(), pe.into(), bf.into(), bt.into(), gap.into(), (gap <= pe + bt).into()]);
        }
        Ok(t)
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let sets = parse_sets("1;2;3;1,2;1,3;2,3;1,2,3")?;
        let x = vec![rat(1, 10), rat(1, 20)];
        let rows = compare(x.clone(), x, 30, 16, &sets)?;
        let bad: Vec<&str> = rows
            .iter()
            .filter(|r| r.5 > r.2 + r.4)
            .map(|r| r.0.as_str())
            .collect();
        let worst = rows.iter().map(|r| r.5).fold(0.0, f64::max);
        Ok(vec![Check::new(
            "pfaffian vs brute force at X = Y = (1/10, 1/20)",
            bad.is_empty(),
            format!("max gap {worst:e}, outside tails {bad:?}"),
        )])
    }
}
