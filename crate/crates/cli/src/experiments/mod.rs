//! Experiments exposed as subcommands, looked up by name.

use std::collections::BTreeMap;

use crate::config::{Config, ParamSpec};
use crate::error::CliResult;
use crate::table::{Table, Value};

mod ascent;
mod corr;
mod hl_moments;
mod identity;
mod limit;
mod principal;
mod qfun;
mod tw;

/// Outcome of one selftest check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn params(&self) -> &'static [ParamSpec];
    /// One line per output column, shown under `--help`.
    fn columns(&self) -> &'static str;
    fn run(&self, cfg: &Config) -> CliResult<Table>;
    /// Small oracle-equivalence checks for the code behind this experiment.
    fn selftest(&self) -> CliResult<Vec<Check>>;
}

pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["check", "pass", "detail"]);
    for c in checks {
        t.push(vec![Value::from(c.name.as_str()), c.pass.into(), c.detail.as_str().into()]);
    }
    t
}

pub struct Registry {
    experiments: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            experiments: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(qfun::Qfun));
        r.register(Box::new(corr::Corr));
        r.register(Box::new(identity::Identity));
        r.register(Box::new(ascent::Ascent));
        r.register(Box::new(tw::Tw));
        r.register(Box::new(limit::Limit));
        r.register(Box::new(hl_moments::HlMoments));
        r.register(Box::new(principal::Principal));
        r
    }

    pub fn register(&mut self, e: Box<dyn Experiment>) {
        self.experiments.insert(e.name(), e);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.experiments.get(name).map(|b| b.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> {
        self.experiments.values().map(|b| b.as_ref())
    }
}
