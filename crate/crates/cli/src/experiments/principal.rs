use shiftlab::principal::{m_principal, principal_cdf_direct, principal_cdf_lambda1, principal_mean_lambda1};

use super::{Check, Experiment};
use crate::config::{Config, ParamSpec};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub struct Principal;

const PARAMS: &[ParamSpec] = &[
    ParamSpec::new("table", "cdf", "cdf or mean"),
    ParamSpec::new("t", "0.2,0.25", "values of t in (0, 1)"),
    ParamSpec::new("hmax", "5", "largest h in the cdf table"),
    ParamSpec::new("direct-size", "40", "largest |lambda| in the direct sum, at most 60"),
];

impl Experiment for Principal {
    fn name(&self) -> &'static str {
        "principal"
    }

    fn about(&self) -> &'static str {
        "First-row law of the Hall-Littlewood measure at the principal specialization"
    }

    fn params(&self) -> &'static [ParamSpec] {
        PARAMS
    }

    fn columns(&self) -> &'static str {
        "--table cdf:\n  \
           t              parameter\n  \
           h              threshold\n  \
           product        P(lambda_1 < h) from the product formula\n  \
           product_error  its error bound\n  \
           direct         the same summed over |lambda| <= direct-size\n  \
           direct_error   its error bound\n  \
           gap            |product - direct|\n\
         --table mean:\n  \
           t              parameter\n  \
           mean           E(lambda_1)\n  \
           error          its error bound\n  \
           t2_ratio       |E(lambda_1) - t^2| / t^3\n  \
           m              M = 2t / (1 - t)\n  \
           m_ratio        E(lambda_1) / M"
    }

    fn run(&self, cfg: &Config) -> CliResult<Table> {
        let ts = cfg.f64s("t")?;
        match cfg.raw("table")? {
            "cdf" => {
                let hmax = cfg.u32("hmax")?;
                let size = cfg.u32("direct-size")?;
                let mut t = Table::new(&["t", "h", "product", "product_error", "direct", "direct_error", "gap"]);
                for &tv in &ts {
                    for h in 1..=hmax {
                        let p = principal_cdf_lambda1(h, tv)?;
                        let d = principal_cdf_direct(h, tv, size)?;
                        t.push(vec![
                            tv.into(),
                            h.into(),
                            p.value.into(),
                            p.error.into(),
                            d.value.into(),
                            d.error.into(),
                            (p.value - d.value).abs().into(),
                        ]);
                    }
                }
                Ok(t)
            }
            "mean" => {
                let mut t = Table::new(&["t", "mean", "error", "t2_ratio", "m", "m_ratio"]);
                for &tv in &ts {
                    let e = principal_mean_lambda1(tv)?;
                    let m = m_principal(tv)?;
                    t.push(vec![
                        tv.into(),
                        e.value.into(),
                        e.error.into(),
                        ((e.value - tv * tv).abs() / tv.powi(3)).into(),
                        m.into(),
                        (e.value / m).into(),
                    ]);
                }
                Ok(t)
            }
            other => Err(CliError::Config(format!("unknown --table {other:?}, expected cdf or mean"))),
        }
    }

    fn selftest(&self) -> CliResult<Vec<Check>> {
        let mut worst: f64 = 0.0;
        for t in [0.2, 0.25] {
            for h in 1..=4 {
                let p = principal_cdf_lambda1(h, t)?;
                let d = principal_cdf_direct(h, t, 36)?;
                worst = worst.max((p.value - d.value).abs());
            }
        }
        let mut ratios = Vec::new();
        for t in [0.05f64, 0.02, 0.01] {
            let e = principal_mean_lambda1(t)?;
            ratios.push((e.value - t * t).abs() / t.powi(3));
        }
        Ok(vec![
            Check::new("product formula vs direct sum", worst <= 1e-9, format!("max gap {worst:e}")),
            Check::new("E(lambda_1) = t^2 + O(t^3)", ratios.iter().all(|&r| r <= 10.0), format!("{ratios:?}")),
        ])
    }
}
