mod config;
mod error;
mod experiments;
mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};

use config::{Config, ParamSpec};
use error::{CliError, CliResult};
use experiments::{checks_table, Experiment, Registry};
use table::Format;

/// Default directory for output files when `--output` is relative or absent.
const OUT_DIR_VAR: &str = "SHIFTLAB_OUT_DIR";

const GLOBALS: &[ParamSpec] = &[
    ParamSpec::new("seed", "20250101", "64-bit seed for Monte Carlo runs"),
    ParamSpec::new("format", "csv", "csv or json"),
    ParamSpec::new("output", "", "output file; stdout when empty"),
    ParamSpec::new("threads", "0", "worker threads; 0 uses every core"),
];

/// Keys that never change the table, so replay output stays byte-identical.
const NOT_EMBEDDED: &[&str] = &["output", "threads"];

fn param_arg(p: &ParamSpec) -> Arg {
    let help = if p.default.is_empty() {
        p.help.to_string()
    } else {
        format!("{} [default: {}]", p.help, p.default)
    };
    Arg::new(p.name)
        .long(p.name)
        .value_name("VALUE")
        .allow_hyphen_values(true)
        .help(help)
}

fn command(registry: &Registry) -> Command {
    let mut cmd = Command::new("shiftlab")
        .about("Reproducible experiments on shifted Schur and Hall-Littlewood measures")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .global(true)
                .help("flat key = value file; flags override it"),
        )
        .arg(
            Arg::new("selftest")
                .long("selftest")
                .action(ArgAction::SetTrue)
                .global(true)
                .help("run the oracle checks behind the experiment instead; exit 4 on failure"),
        );
    for g in GLOBALS {
        cmd = cmd.arg(param_arg(g).global(true));
    }
    for e in registry.iter() {
        let mut sub = Command::new(e.name())
            .about(e.about())
            .after_help(format!("Output columns:\n{}", e.columns()));
        for p in e.params() {
            sub = sub.arg(param_arg(p).help_heading("Parameters"));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn explicit_flags(m: &ArgMatches, specs: &[ParamSpec]) -> BTreeMap<String, String> {
    specs
        .iter()
        .chain(GLOBALS)
        .filter(|p| m.value_source(p.name) == Some(ValueSource::CommandLine))
        .filter_map(|p| m.get_one::<String>(p.name).map(|v| (p.name.to_string(), v.clone())))
        .collect()
}

fn destination(output: &str, experiment: &str, format: Format) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_VAR).filter(|d| !d.is_empty()).map(PathBuf::from);
    if output.is_empty() {
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        return dir.map(|d| d.join(format!("{experiment}.{ext}")));
    }
    let path = PathBuf::from(output);
    match dir {
        Some(d) if path.is_relative() => Some(d.join(path)),
        _ => Some(path),
    }
}

fn emit(bytes: &[u8], dest: Option<&Path>) -> CliResult<()> {
    match dest {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, bytes)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn configure_threads(threads: usize) -> CliResult<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("--threads {threads}: {e}")))
}

fn dispatch(experiment: &dyn Experiment, m: &ArgMatches, selftest: bool, config_file: Option<&Path>) -> CliResult<()> {
    let flags = explicit_flags(m, experiment.params());
    let cfg = Config::resolve(experiment.params(), GLOBALS, config_file, &flags)?;
    let format: Format = cfg.raw("format")?.parse().map_err(CliError::Config)?;
    cfg.u64("seed")?;
    configure_threads(cfg.usize("threads")?)?;
    let dest = destination(cfg.raw("output")?, experiment.name(), format);
    let embedded = Config::from_pairs(cfg.entries().filter(|(k, _)| !NOT_EMBEDDED.contains(k)));

    let mut buf = Vec::new();
    if selftest {
        let checks = experiment.selftest().map_err(|e| CliError::Selftest(e.to_string()))?;
        checks_table(&checks).write(format, &format!("{} selftest", experiment.name()), &embedded, &mut buf)?;
        emit(&buf, dest.as_deref())?;
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        if !failed.is_empty() {
            return Err(CliError::Selftest(failed.join("; ")));
        }
        return Ok(());
    }
    let table = experiment.run(&cfg)?;
    table.write(format, experiment.name(), &embedded, &mut buf)?;
    emit(&buf, dest.as_deref())
}

fn run(args: Vec<OsString>) -> CliResult<()> {
    let registry = Registry::with_builtins();
    let matches = match command(&registry).try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let benign = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { Ok(()) } else { Err(CliError::Config("invalid arguments".into())) };
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let experiment = registry.get(name).expect("subcommands come from the registry");
    let config_file = sub.get_one::<String>("config").map(PathBuf::from);
    dispatch(experiment, sub, sub.get_flag("selftest"), config_file.as_deref())
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shiftlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
