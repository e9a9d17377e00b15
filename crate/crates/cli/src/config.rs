//! TOML run configuration.
//!
//! Every key is optional; missing keys fall back to the reference scenario.
//!
//! ```toml
//! schema_version = 1
//! lambda0 = 7.66e-3
//! lambda2 = 3.06e-3
//! p0 = 1.0
//! p1 = 100.0
//! p2 = 1.0
//! delta_db = 20.0      # -inf gives a zero offset
//! alpha = 4.0
//! d = 28.867513459481287
//! t1 = 1.0
//! t2 = 1.0
//! noise = 0.0
//! output = "coverage.csv"
//!
//! [sweep]
//! parameter = "delta_db"   # delta_db | lambda2_scale | lambda0_scale | t1 | t2 | alpha
//! values = [0.0, 10.0, 20.0]
//! mode = "both"            # analytic | montecarlo | both
//! n_trials = 100000
//! seed = 1
//!
//! [quadrature]
//! rel_tol = 1e-10
//! max_subdiv = 200
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hetnet::radio::db_to_linear;
use hetnet::{QuadratureConfig, SystemParams};
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DELTA_DB: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    DeltaDb,
    Lambda2Scale,
    Lambda0Scale,
    T1,
    T2,
    Alpha,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::DeltaDb => "delta_db",
            Self::Lambda2Scale => "lambda2_scale",
            Self::Lambda0Scale => "lambda0_scale",
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::Alpha => "alpha",
        }
    }

    /// `base` with this parameter set to `value`. Intensity scales multiply
    /// the configured intensity.
    pub fn apply(self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = *base;
        match self {
            Self::DeltaDb => p.delta = db_to_linear(value),
            Self::Lambda2Scale => p.lambda2 = base.lambda2 * value,
            Self::Lambda0Scale => p.lambda0 = base.lambda0 * value,
            Self::T1 => p.t1 = value,
            Self::T2 => p.t2 = value,
            Self::Alpha => p.alpha = value,
        }
        p
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Analytic,
    #[serde(alias = "mc")]
    Montecarlo,
    Both,
}

impl Mode {
    pub fn analytic(self) -> bool {
        matches!(self, Self::Analytic | Self::Both)
    }

    pub fn montecarlo(self) -> bool {
        matches!(self, Self::Montecarlo | Self::Both)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "mc" | "montecarlo" => Ok(Self::Montecarlo),
            "both" => Ok(Self::Both),
            other => Err(format!(
                "unknown mode `{other}` (expected analytic, mc or both)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub mode: Mode,
    pub n_trials: u64,
    pub seed: u64,
}

impl Default for SweepSpec {
    /// Offset sweep 0..40 dB in 2 dB steps.
    fn default() -> Self {
        Self {
            parameter: SweepParameter::DeltaDb,
            values: (0..=20).map(|i| 2.0 * i as f64).collect(),
            mode: Mode::Analytic,
            n_trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.values.is_empty() {
            return Err(CliError::Invalid("sweep.values must not be empty".into()));
        }
        if self.mode.montecarlo() && self.n_trials == 0 {
            return Err(CliError::Invalid(
                "sweep.n_trials must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub sweep: Option<SweepSpec>,
    pub output: Option<PathBuf>,
    pub quadrature: QuadratureConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: Option<u32>,
    lambda0: Option<f64>,
    lambda2: Option<f64>,
    p0: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    delta_db: Option<f64>,
    alpha: Option<f64>,
    d: Option<f64>,
    t1: Option<f64>,
    t2: Option<f64>,
    noise: Option<f64>,
    output: Option<PathBuf>,
    sweep: Option<RawSweep>,
    quadrature: Option<RawQuadrature>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: SweepParameter,
    values: Vec<f64>,
    mode: Option<Mode>,
    n_trials: Option<u64>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    rel_tol: Option<f64>,
    max_subdiv: Option<usize>,
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            return Err(CliError::Invalid(format!(
                "unsupported schema_version {v} (this build reads {SCHEMA_VERSION})"
            )));
        }
    }
    let def = SystemParams::default();
    let params = SystemParams {
        lambda0: raw.lambda0.unwrap_or(def.lambda0),
        lambda2: raw.lambda2.unwrap_or(def.lambda2),
        p0: raw.p0.unwrap_or(def.p0),
        p1: raw.p1.unwrap_or(def.p1),
        p2: raw.p2.unwrap_or(def.p2),
        delta: db_to_linear(raw.delta_db.unwrap_or(DEFAULT_DELTA_DB)),
        alpha: raw.alpha.unwrap_or(def.alpha),
        d: raw.d.unwrap_or(def.d),
        t1: raw.t1.unwrap_or(def.t1),
        t2: raw.t2.unwrap_or(def.t2),
        noise: raw.noise.unwrap_or(def.noise),
    };
    params.validate()?;

    let mut quadrature = QuadratureConfig::default();
    if let Some(q) = raw.quadrature {
        quadrature.rel_tol = q.rel_tol.unwrap_or(quadrature.rel_tol);
        quadrature.max_subdiv = q.max_subdiv.unwrap_or(quadrature.max_subdiv);
    }
    quadrature.validate()?;

    let sweep = raw.sweep.map(|s| SweepSpec {
        parameter: s.parameter,
        values: s.values,
        mode: s.mode.unwrap_or(Mode::Analytic),
        n_trials: s.n_trials.unwrap_or(DEFAULT_TRIALS),
        seed: s.seed.unwrap_or(DEFAULT_SEED),
    });
    if let Some(s) = &sweep {
        s.validate()?;
    }

    Ok(RunConfig {
        params,
        sweep,
        output: raw.output,
        quadrature,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
