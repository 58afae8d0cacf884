use shiftlab::tracy_widom::{f2, S_MIN};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Tw;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("smin", "-8", "left end of the s grid, at least -12"),
    ParamSpec::new("smax", "4", "right end of the s grid"),
    ParamSpec::new("step", "0.5", "grid spacing"),
    ParamSpec::new("m", "80", "quadrature order; the error column uses 2m as well"),
];

const MAX_POINTS: usize = 10_000;
const MAX_ORDER: usize = 600;

/// `smin, smin + step, ...` up to `smax`, computed by index to avoid drift.
fn grid(smin: f64, smax: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) {
        return Err(CliError::Config("--step must be positive".into()));
    }
    if smax < smin {
        return Err(CliError::Config("--smax must be at least --smin".into()));
    }
    let count = ((smax - smin) / step + 1e-9).floor() as usize + 1;
    if count > MAX_POINTS {
        return Err(CliError::Scale(format!("{count} grid points exceed {MAX_POINTS}")));
    }
    Ok((0..count).map(|i| smin + step * i as f64).collect())
}

impl Experiment for Tw {
    fn name(&self) -> &'static str {
        "tw"
    }

    fn about(&self) -> &'static str {
        "GUE Tracy-Widom distribution F2 on a grid"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "s      grid point\n\
         f2     F2(s) with an m-point rule\n\
         error  |F2 at order m - F2 at order 2m|"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let smin = cfg.f64("smin")?;
        if smin < S_MIN {
            return Err(CliError::Config(format!("--smin {smin} is below {S_MIN}")));
        }
        let m = cfg.usize("m")?;
        if m > MAX_ORDER {
            return Err(CliError::Scale(format!("--m {m} exceeds {MAX_ORDER}")));
        }
        let mut t = Table::new(&["s", "f2", "error"]);
        for s in grid(smin, cfg.f64("smax")?, cfg.f64("step")?)? {
            let v = f2(s, m)?;
            t.push(vec![s.into(), v.value.into(), v.error.into()]);
        }
        Ok(t)
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let mut out = Vec::new();
        // reference value from an independent high-precision evaluation
        let v = f2(-2.0, 60)?;
        let gap = (v.value - 0.413_224_142_505_122_6).abs();
        out.push(Check::new("F2(-2) reference value", gap < 1e-10, format!("gap {gap:e}")));
        let mut prev = 0.0;
        let mut monotone = true;
        let mut worst: f64 = 0.0;
        for s in grid(-8.0, 4.0, 1.0)? {
            let v = f2(s, 40)?;
            monotone &= v.value >= prev;
            worst = worst.max(v.error);
            prev = v.value;
        }
        out.push(Check::new("monotone on [-8, 4]", monotone, ""));
        out.push(Check::new("self-convergence at m = 40", worst <= 1e-8, format!("max {worst:e}")));
        let right = f2(8.0, 40)?.value;
        out.push(Check::new("F2(8) >= 1 - 1e-8", right >= 1.0 - 1e-8, format!("{right}")));
        Ok(out)
    }
}
