use shiftlab::limit::probe_grid;

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Limit;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("xi", "1e4,1e5,1e6", "values of xi, at most 1e8"),
    ParamSpec::new("points", "-1,0,1", "scaled positions x; the grid is points x points"),
];

impl Experiment for Limit {
    fn name(&self) -> &'static str {
        "limit"
    }

    fn about(&self) -> &'static str {
        "Correlation kernel near the edge against the Airy kernel"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "xi           poissonization parameter\n\
         x, y         scaled positions\n\
         u, v         floor(2 sqrt(2 xi) + x (2 xi)^(1/6)), likewise for y\n\
         plus_plus    (2 xi)^(1/6) K(u, v)\n\
         plus_minus   (2 xi)^(1/6) K(u, -v)\n\
         minus_minus  (2 xi)^(1/6) K(-u, -v)\n\
         airy         Airy kernel at (x, y)\n\
         mixed_gap    |plus_minus - airy|\n\
         error        certified bound on the kernel evaluation error"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let points = cfg.f64s("points")?;
        if points.is_empty() {
            return Err(CliError::Config("--points is empty".into()));
        }
        let mut t = Table::new(&[
            "xi", "x", "y", "u", "v", "plus_plus", "plus_minus", "minus_minus", "airy", "mixed_gap", "error",
        ]);
        for xi in cfg.f64s("xi")? {
            for p in probe_grid(xi, &points)? {
                t.push(vec![
                    p.xi.into(),
                    p.x.into(),
                    p.y.into(),
                    p.u.into(),
                    p.v.into(),
                    p.plus_plus.into(),
                    p.plus_minus.into(),
                    p.minus_minus.into(),
                    p.airy.into(),
                    p.mixed_gap().into(),
                    p.error.into(),
                ]);
            }
        }
        Ok(t)
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let grid = [-1.0, 0.0, 1.0];
        let mut gaps = Vec::new();
        let mut diag = Vec::new();
        for xi in [1e4, 1e5] {
            let probes = probe_grid(xi, &grid)?;
            gaps.push(probes.iter().map(|p| p.mixed_gap()).fold(0.0, f64::max));
            diag.push(probes.iter().map(|p| p.plus_plus.abs().max(p.minus_minus.abs())).fold(0.0, f64::max));
        }
        Ok(vec![
            Check::new("mixed block near Airy at xi = 1e5", gaps[1] <= 0.05, format!("max gap {:e}", gaps[1])),
            Check::new("diagonal blocks shrink from xi = 1e4 to 1e5", diag[1] < diag[0], format!("{:e} -> {:e}", diag[0], diag[1])),
        ])
    }
}
