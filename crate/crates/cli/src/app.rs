use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hetnet::validate::{run_all, ValidationOptions};

use crate::config::{load_config, Mode, RunConfig, SweepSpec, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::{
    determinism_check, emit_csv, run_single, run_sweep, write_csv, CliError, Row, RunOptions,
    SweepParameter,
};

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hetnet",
    version,
    about = "Uplink coverage of two-tier cellular networks with range expansion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form coverage for the configured parameters.
    Analytic(Common),
    /// Monte Carlo coverage for the configured parameters.
    Simulate(Common),
    /// Run the configured sweep (default: offset 0..40 dB).
    Sweep(Common),
    /// Run the invariant suite and report one line per check.
    Validate(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV output path (overrides the config; default stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Monte Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// analytic, mc or both.
    #[arg(long)]
    pub mode: Option<Mode>,
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    match &common.config {
        Some(path) => load_config(path),
        None => Ok(RunConfig::default()),
    }
}

fn write_rows(rows: &[Row], cfg: &RunConfig, common: &Common) -> Result<(), CliError> {
    match common.output.as_ref().or(cfg.output.as_ref()) {
        Some(path) => emit_csv(rows, path),
        None => {
            let stdout = std::io::stdout();
            write_csv(rows, stdout.lock()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                source: e.into(),
            })
        }
    }
}

fn report_rows(rows: &[Row]) -> i32 {
    let failed: Vec<&Row> = rows.iter().filter(|r| r.failed()).collect();
    for r in &failed {
        let value = r.sweep_value.map(|v| v.to_string()).unwrap_or_default();
        eprintln!(
            "row failed: {}={}: {}",
            r.sweep_param,
            value,
            r.error.as_deref().unwrap_or("")
        );
    }
    if failed.is_empty() {
        0
    } else {
        eprintln!("{} of {} rows failed", failed.len(), rows.len());
        EXIT_FAILED
    }
}

fn execute(command: &Command, opts: RunOptions) -> Result<i32, CliError> {
    match command {
        Command::Analytic(c) | Command::Simulate(c) => {
            let cfg = load(c)?;
            let default_mode = if matches!(command, Command::Analytic(_)) {
                Mode::Analytic
            } else {
                Mode::Montecarlo
            };
            let sweep = cfg.sweep.clone().unwrap_or_default();
            let row = run_single(
                &cfg,
                c.mode.unwrap_or(default_mode),
                c.trials.unwrap_or(sweep.n_trials),
                c.seed.unwrap_or(sweep.seed),
                opts,
            );
            let rows = [row];
            write_rows(&rows, &cfg, c)?;
            Ok(report_rows(&rows))
        }
        Command::Sweep(c) => {
            let cfg = load(c)?;
            let mut spec = cfg.sweep.clone().unwrap_or_default();
            spec.mode = c.mode.unwrap_or(spec.mode);
            spec.n_trials = c.trials.unwrap_or(spec.n_trials);
            spec.seed = c.seed.unwrap_or(spec.seed);
            spec.validate()?;
            let rows = run_sweep(&cfg, &spec, opts);
            write_rows(&rows, &cfg, c)?;
            Ok(report_rows(&rows))
        }
        Command::Validate(c) => {
            let cfg = load(c)?;
            let mut vopts = ValidationOptions {
                n_trials: c.trials.unwrap_or(DEFAULT_TRIALS),
                seed: c.seed.unwrap_or(ValidationOptions::default().seed),
                quadrature: cfg.quadrature,
                ..ValidationOptions::default()
            };
            vopts.sim.workers = opts.workers;
            let mut checks = run_all(&vopts);
            let spec = SweepSpec {
                parameter: SweepParameter::DeltaDb,
                values: vec![0.0, 20.0, 40.0],
                mode: Mode::Both,
                n_trials: vopts.n_trials.min(20_000),
                seed: c.seed.unwrap_or(DEFAULT_SEED),
            };
            checks.push(determinism_check(&RunConfig::default(), &spec, &[1, 2, 8]));
            let mut out = std::io::stdout().lock();
            for check in &checks {
                let _ = writeln!(out, "{check}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(
                out,
                "{} of {} checks passed",
                checks.len() - failed,
                checks.len()
            );
            Ok(if failed == 0 { 0 } else { EXIT_FAILED })
        }
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli, workers_env: Option<&str>) -> i32 {
    let result = crate::parse_workers(workers_env)
        .and_then(|workers| execute(&cli.command, RunOptions { workers }));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
