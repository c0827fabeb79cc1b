use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::parser::ValueSource;
use clap::{Arg, ArgMatches, Command};

use super::config::{parse_config_text, ExperimentConfig, KEYS};
use super::report::write_bench_csv;
use super::study::{convergence_study, timing_sweep};
use crate::cq::WeightTable;
use crate::error::{Error, Result};
use crate::kernel::kernel_error_report;
use crate::output::sci;
use crate::solver::{run_with, write_snapshot};

fn command() -> Command {
    let mut cmd = Command::new("fraq")
        .about("Fast convolution quadrature for the two-state fractional Fokker-Planck system")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("key = value settings file; flags override it")
                .global(true),
        );
    for (key, help) in KEYS {
        let mut arg = Arg::new(*key)
            .long(*key)
            .value_name("VALUE")
            .help(*help)
            .allow_negative_numbers(true)
            .global(true);
        if *key == "auto-head" {
            arg = arg.num_args(0..=1).default_missing_value("true");
        }
        cmd = cmd.arg(arg);
    }
    cmd.subcommand(Command::new("weights").about("CQ weight table d_0..d_n as CSV i,d_i"))
        .subcommand(
            Command::new("kernel-error").about("compressed-kernel error eps_i as CSV i,eps_abs"),
        )
        .subcommand(Command::new("solve").about("single run; snapshot CSV x,g1,g2"))
        .subcommand(
            Command::new("convergence").about("error and rate table against a reference run"),
        )
        .subcommand(Command::new("bench").about("loop and setup wall times over n-list"))
}

fn resolve(m: &ArgMatches) -> Result<ExperimentConfig> {
    let file = match m.get_one::<String>("config") {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read config `{path}`: {e}")))?;
            parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    let cli: Vec<(String, String)> = KEYS
        .iter()
        .filter(|(key, _)| m.value_source(key) == Some(ValueSource::CommandLine))
        .filter_map(|(key, _)| m.get_one::<String>(key).map(|v| (key.to_string(), v.clone())))
        .collect();
    ExperimentConfig::resolve(&file, &cli)
}

/// Opens `name` in the output directory, or hands back stdout.
fn sink<'a>(cfg: &ExperimentConfig, name: &str, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    match &cfg.out {
        Some(dir) => Ok(Box::new(BufWriter::new(File::create(dir.join(name))?))),
        None => Ok(Box::new(stdout)),
    }
}

fn prepare_out(cfg: &ExperimentConfig) -> Result<()> {
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("meta.txt"), cfg.to_text())?;
    }
    Ok(())
}

fn first_scheme(cfg: &ExperimentConfig) -> crate::solver::SchemeKind {
    cfg.schemes[0]
}

fn cmd_weights(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let table = WeightTable::new(first_scheme(cfg).family(), cfg.alpha, cfg.tau, cfg.n)?;
    prepare_out(cfg)?;
    let mut w = csv::Writer::from_writer(sink(cfg, "weights.csv", out)?);
    w.write_record(["i", "d_i"])?;
    for (i, d) in table.weights.iter().enumerate() {
        w.write_record([i.to_string(), sci(*d)])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_kernel_error(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let kernel = cfg.kernels().build(first_scheme(cfg).family(), cfg.alpha, cfg.tau, cfg.n)?;
    let report = kernel_error_report(&kernel, cfg.n)?;
    prepare_out(cfg)?;
    report.write_csv(sink(cfg, "kernel_error.csv", out)?)
}

fn cmd_solve(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let n_steps = cfg.steps_for(cfg.tau)?;
    let spec = cfg.problem(cfg.alpha1, cfg.alpha2, n_steps);
    let times = if cfg.at.is_empty() { vec![cfg.t_final] } else { cfg.at.clone() };
    let mut levels = Vec::with_capacity(times.len());
    for &t in &times {
        let n = (t / cfg.tau).round();
        if !(0.0..=n_steps as f64).contains(&n) || (n * cfg.tau - t).abs() > 1e-9 * cfg.t_final {
            return Err(Error::Usage(format!("snapshot time {t} is not a step of size {}", cfg.tau)));
        }
        levels.push(n as usize);
    }
    if cfg.out.is_none() && levels.len() > 1 {
        return Err(Error::Usage("several snapshot times need an output directory (--out)".into()));
    }
    prepare_out(cfg)?;
    let mut snaps = Vec::new();
    run_with(&spec, first_scheme(cfg), &cfg.kernels(), |f| {
        if levels.contains(&f.n) {
            snaps.push(f.clone());
        }
    })?;
    for (t, n) in times.iter().zip(&levels) {
        let field = snaps.iter().find(|f| f.n == *n).expect("every level observed");
        write_snapshot(&spec, field, sink(cfg, &format!("snapshot_t{t}.csv"), out)?)?;
    }
    Ok(())
}

fn cmd_convergence(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let reports = convergence_study(cfg)?;
    prepare_out(cfg)?;
    for rep in &reports {
        match &cfg.out {
            Some(dir) => {
                rep.write_csv(BufWriter::new(File::create(dir.join(format!("{}.csv", rep.file_stem())))?))?;
                writeln!(out, "{}", rep.to_table())?;
            }
            None => {
                writeln!(out, "# scheme={} alpha1={} alpha2={}", rep.scheme, rep.alpha1, rep.alpha2)?;
                rep.write_csv(&mut *out)?;
            }
        }
    }
    Ok(())
}

fn cmd_bench(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let rows = timing_sweep(cfg)?;
    prepare_out(cfg)?;
    write_bench_csv(&rows, sink(cfg, "bench.csv", out)?)
}

/// Runs the command line `args` (program name first) and returns the exit
/// status: 0 on success, 2 for usage errors, 1 for numerical failures.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let status = e.exit_code();
            let text = e.render().to_string();
            let _ = if status == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return status;
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let result = resolve(sub).and_then(|cfg| match name {
        "weights" => cmd_weights(&cfg, out),
        "kernel-error" => cmd_kernel_error(&cfg, out),
        "solve" => cmd_solve(&cfg, out),
        "convergence" => cmd_convergence(&cfg, out),
        "bench" => cmd_bench(&cfg, out),
        _ => unreachable!("clap rejects unknown subcommands"),
    });
    let result = result.and_then(|_| out.flush().map_err(Error::from));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "fraq {name}: {e}");
            match e {
                Error::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Reads the config file at `path` and applies it over the defaults.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    ExperimentConfig::resolve(&parse_config_text(&text)?, &[])
}
