//! Sweep execution.
//!
//! Every Monte Carlo row of a sweep uses the same seed, so neighbouring rows
//! share random numbers and the simulated curve is smooth in the swept value.

use hetnet::analytics::coverage_closed;
use hetnet::{
    CoverageBreakdown, CoverageEstimate, QuadratureConfig, SimConfig, Simulator, SystemParams,
};

use crate::config::{Mode, RunConfig, SweepSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_param: String,
    /// `None` for a single evaluation outside any sweep.
    pub sweep_value: Option<f64>,
    pub analytic: Option<CoverageBreakdown>,
    pub mc: Option<CoverageEstimate>,
    /// Set when the row failed; all result cells are then empty.
    pub error: Option<String>,
}

impl Row {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Worker threads for Monte Carlo; `None` uses all cores.
    pub workers: Option<usize>,
}

/// Evaluates one parameter set in the requested mode.
pub fn evaluate(
    params: &SystemParams,
    mode: Mode,
    n_trials: u64,
    seed: u64,
    quadrature: &QuadratureConfig,
    opts: RunOptions,
) -> Result<(Option<CoverageBreakdown>, Option<CoverageEstimate>), hetnet::Error> {
    params.validate()?;
    let analytic = if mode.analytic() {
        Some(coverage_closed(params, quadrature)?)
    } else {
        None
    };
    let mc = if mode.montecarlo() {
        let sim = SimConfig {
            workers: opts.workers,
            ..SimConfig::default()
        };
        Some(Simulator::new(*params, sim)?.estimate_coverage(n_trials, seed)?)
    } else {
        None
    };
    Ok((analytic, mc))
}

fn row(
    param: &str,
    value: Option<f64>,
    result: Result<(Option<CoverageBreakdown>, Option<CoverageEstimate>), hetnet::Error>,
) -> Row {
    match result {
        Ok((analytic, mc)) => Row {
            sweep_param: param.to_string(),
            sweep_value: value,
            analytic,
            mc,
            error: None,
        },
        Err(e) => Row {
            sweep_param: param.to_string(),
            sweep_value: value,
            analytic: None,
            mc: None,
            error: Some(e.to_string()),
        },
    }
}

/// One row per sweep value; a failing value yields a failed row and the
/// sweep continues.
pub fn run_sweep(cfg: &RunConfig, spec: &SweepSpec, opts: RunOptions) -> Vec<Row> {
    spec.values
        .iter()
        .map(|&v| {
            let params = spec.parameter.apply(&cfg.params, v);
            let result = evaluate(
                &params,
                spec.mode,
                spec.n_trials,
                spec.seed,
                &cfg.quadrature,
                opts,
            );
            row(spec.parameter.name(), Some(v), result)
        })
        .collect()
}

/// A single evaluation of the configured parameters, labelled `none`.
pub fn run_single(cfg: &RunConfig, mode: Mode, n_trials: u64, seed: u64, opts: RunOptions) -> Row {
    row(
        "none",
        None,
        evaluate(&cfg.params, mode, n_trials, seed, &cfg.quadrature, opts),
    )
}
