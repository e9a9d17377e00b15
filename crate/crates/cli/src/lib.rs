//! Command-line front end for the `hetnet` coverage engine: configuration,
//! parameter sweeps and CSV output.

pub mod app;
pub mod config;
pub mod output;
pub mod sweep;

use std::path::PathBuf;

use hetnet::validate::Check;

pub use config::{load_config, parse_config, Mode, RunConfig, SweepParameter, SweepSpec};
pub use output::{emit_csv, to_csv_string, write_csv, HEADER};
pub use sweep::{run_single, run_sweep, Row, RunOptions};

/// Environment variable capping the number of Monte Carlo worker threads.
pub const WORKERS_ENV: &str = "HETNET_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] hetnet::Error),
}

/// Reads the worker cap from `value`, the contents of [`WORKERS_ENV`].
pub fn parse_workers(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Invalid(format!(
                "{WORKERS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
    }
}

/// Runs the same sweep under each worker count and twice under the first,
/// and checks that the CSV output is byte-identical.
pub fn determinism_check(cfg: &RunConfig, spec: &SweepSpec, worker_counts: &[usize]) -> Check {
    let render = |w: usize| to_csv_string(&run_sweep(cfg, spec, RunOptions { workers: Some(w) }));
    let reference = render(worker_counts.first().copied().unwrap_or(1));
    let mut runs = vec![render(worker_counts.first().copied().unwrap_or(1))];
    runs.extend(worker_counts.iter().map(|&w| render(w)));
    let mismatches = runs.iter().filter(|r| **r != reference).count();
    let counts: Vec<String> = worker_counts.iter().map(|w| w.to_string()).collect();
    Check {
        id: 8,
        name: "output is byte-identical across runs and worker counts",
        passed: mismatches == 0,
        detail: format!(
            "{} rows x {} trials, workers {{{}}}, {} of {} runs differ",
            spec.values.len(),
            spec.n_trials,
            counts.join(", "),
            mismatches,
            runs.len()
        ),
    }
}
