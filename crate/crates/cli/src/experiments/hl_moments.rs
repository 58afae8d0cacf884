use shiftlab::hall_littlewood::{brute_moments, mean_size, var_size, HlConfig};
use shiftlab::{rat, Rational, Scalar};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::CliResult;
use crate::table::Table;

pub struct HlMoments;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("t", "0,-1,1/2", "values of t in [-1, 1]"),
    ParamSpec::new("x", "1/5,1/7", "X variables, at most 3"),
    ParamSpec::new("y", "1/5,1/7", "Y variables, at most 3"),
    ParamSpec::new("cutoff", "30", "largest |lambda| in the brute-force sum, at most 30"),
];

struct Row {
    t: Rational,
    mean: Rational,
    var: Rational,
    mean_gap: f64,
    mean_tail: f64,
    var_gap: f64,
    var_tail: f64,
}

fn compare(t: Rational, xs: Vec<Rational>, ys: Vec<Rational>, cutoff: u32) -> CliResult<Row> {
    let cfg = HlConfig::new(t.clone(), xs, ys, cutoff)?;
    let b = brute_moments(&cfg)?;
    let mean = mean_size(&cfg)?;
    let var = var_size(&cfg)?;
    Ok(Row {
        t,
        mean_gap: (mean.clone() - &b.mean).magnitude().as_f64(),
        var_gap: (var.clone() - &b.variance).magnitude().as_f64(),
        mean,
        var,
        mean_tail: b.mean_tail,
        var_tail: b.variance_tail,
    })
}

impl Experiment for HlMoments {
    fn name(&self) -> &'static str {
        "hl-moments"
    }

    fn about(&self) -> &'static str {
        "Mean and variance of |lambda| under the Hall-Littlewood measure"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "t              parameter\n\
         mean           E|lambda| in closed form\n\
         mean_gap       |closed form - truncated sum|, exact\n\
         mean_tail      certified bound on the truncated sum's error\n\
         variance       Var|lambda| in closed form\n\
         variance_gap   the same comparison for the variance\n\
         variance_tail  its bound\n\
         within         whether both gaps lie within their bounds"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let (xs, ys) = (cfg.rationals("x")?, cfg.rationals("y")?);
        let cutoff = cfg.u32("cutoff")?;
        let mut t = Table::new(&[
            "t", "mean", "mean_gap", "mean_tail", "variance", "variance_gap", "variance_tail", "within",
        ]);
        for tv in cfg.rationals("t")? {
            let r = compare(tv, xs.clone(), ys.clone(), cutoff)?;
            let within = r.mean_gap <= r.mean_tail && r.var_gap <= r.var_tail;
            t.push(vec![
                r.t.to_string().into(),
                r.mean.as_f64().into(),
                r.mean_gap.into(),
                r.mean_tail.into(),
                r.var.as_f64().into(),
                r.var_gap.into(),
                r.var_tail.into(),
                within.into(),
            ]);
        }
        Ok(t)
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let xs = vec![rat(1, 5), rat(1, 7)];
        let mut out = Vec::new();
        for t in [rat(0, 1), rat(-1, 1), rat(1, 2)] {
            let r = compare(t.clone(), xs.clone(), xs.clone(), 20)?;
            out.push(Check::new(
                format!("closed-form moments vs brute force at t = {t}"),
                r.mean_gap <= r.mean_tail && r.var_gap <= r.var_tail && r.mean_tail <= 1e-8,
                format!("mean gap {:e} <= {:e}, variance gap {:e} <= {:e}", r.mean_gap, r.mean_tail, r.var_gap, r.var_tail),
            ));
        }
        Ok(out)
    }
}
