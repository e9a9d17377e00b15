//! Executable checks tying the closed forms, the quadrature oracles and the
//! simulator together.
//!
//! Each check returns a [`Check`] rather than panicking so that callers (the
//! test suite, the `validate` subcommand) decide how to report failures.

use std::fmt;

use crate::analytics::{
    coverage_closed, laplace_success_prob, macro_association_probability, p_msuc_closed,
    p_msuc_numeric, p_psuc_closed, p_psuc_numeric, p_psuc_terms, QuadratureConfig,
};
use crate::error::Result;
use crate::geometry::{f1_cdf, nearest_macro_distance, sample_user_position, CellGeometry};
use crate::montecarlo::{SimConfig, Simulator};
use crate::radio::{db_to_linear, SystemParams};
use crate::stats::{ks_critical_1pct, ks_statistic};
use crate::stochastic::{derive_stream, sample_nearest_pico_distance};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    pub n_trials: u64,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
    pub sim: SimConfig,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            n_trials: 100_000,
            seed: 20_240_601,
            quadrature: QuadratureConfig::default(),
            sim: SimConfig::default(),
        }
    }
}

/// The 3x3x3x3 grid over alpha, delta, pico intensity and a common threshold.
pub fn parameter_grid() -> Vec<SystemParams> {
    let base = SystemParams::default();
    let mut grid = Vec::with_capacity(81);
    for alpha in [2.5, 3.0, 4.0] {
        for delta in [1.0, 100.0, 1e4] {
            for scale in [0.25, 1.0, 4.0] {
                for t in [0.1, 1.0, 10.0] {
                    grid.push(SystemParams {
                        alpha,
                        delta,
                        lambda2: base.lambda2 * scale,
                        t1: t,
                        t2: t,
                        ..base
                    });
                }
            }
        }
    }
    grid
}

fn check(id: u32, name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        id,
        name,
        passed,
        detail,
    }
}

/// Closed forms against their quadrature oracles on the parameter grid.
pub fn oracle_equivalence(cfg: &QuadratureConfig) -> Result<Check> {
    let mut worst_m = 0.0f64;
    let mut worst_p = 0.0f64;
    let mut worst_flipped = 0.0f64;
    let mut bounded = true;
    for p in parameter_grid() {
        let (mc, mn) = (p_msuc_closed(&p, cfg)?, p_msuc_numeric(&p, cfg)?);
        let (pc, pn) = (p_psuc_closed(&p, cfg)?, p_psuc_numeric(&p, cfg)?);
        worst_m = worst_m.max((mc - mn).abs());
        worst_p = worst_p.max((pc - pn).abs());
        worst_flipped = worst_flipped.max((p_psuc_terms(&p, cfg)?.sign_flipped_sum() - pn).abs());
        bounded &= mc >= 0.0 && pc >= 0.0 && mc + pc <= 1.0 + 1e-12;
    }
    let passed = worst_m <= 1e-6 && worst_p <= 1e-6 && bounded;
    Ok(check(
        1,
        "closed forms match quadrature oracles",
        passed,
        format!(
            "81 points; max |macro diff| = {worst_m:.3e}, max |pico diff| = {worst_p:.3e}; \
             pico expression with the overlap term added instead of subtracted is off by up to {worst_flipped:.3e}"
        ),
    ))
}

/// Analytic coverage against the simulator at the reference point.
pub fn analytic_vs_simulation(opts: &ValidationOptions) -> Result<Check> {
    let params = SystemParams::default();
    let analytic = coverage_closed(&params, &opts.quadrature)?;
    let est = Simulator::new(params, opts.sim)?.estimate_coverage(opts.n_trials, opts.seed)?;
    let diff = (est.p_c_hat - analytic.p_c).abs();
    Ok(check(
        2,
        "analytic coverage matches simulation",
        diff <= 3.0 * est.stderr,
        format!(
            "analytic {:.6}, simulated {:.6} +/- {:.6} (n = {}), |diff| = {:.2} stderr",
            analytic.p_c,
            est.p_c_hat,
            est.stderr,
            est.n_trials,
            diff / est.stderr
        ),
    ))
}

/// Coverage over the offset grid 0..40 dB peaks at 20 dB and drops by 40 dB.
pub fn offset_sweep_shape(cfg: &QuadratureConfig) -> Result<Check> {
    let base = SystemParams::default();
    let mut curve = Vec::new();
    for step in 0..=20 {
        let db = 2.0 * step as f64;
        let p = SystemParams {
            delta: db_to_linear(db),
            ..base
        };
        curve.push((db, coverage_closed(&p, cfg)?.p_c));
    }
    let (argmax, max) =
        curve
            .iter()
            .copied()
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, (db, v)| {
                if v > acc.1 {
                    (db, v)
                } else {
                    acc
                }
            });
    let at_40 = curve.last().map(|c| c.1).unwrap_or(f64::NAN);
    Ok(check(
        3,
        "offset sweep peaks at 20 dB",
        argmax == 20.0 && at_40 < max,
        format!("argmax {argmax} dB, p_c(20 dB) = {max:.6}, p_c(40 dB) = {at_40:.6}"),
    ))
}

/// Coverage rises with pico intensity; simulation agrees at each scale.
pub fn pico_intensity_trend(opts: &ValidationOptions) -> Result<Check> {
    let base = SystemParams::default();
    let mut analytic = Vec::new();
    let mut worst_z = 0.0f64;
    for scale in [0.5, 1.0, 2.0, 4.0] {
        let p = SystemParams {
            lambda2: base.lambda2 * scale,
            ..base
        };
        let a = coverage_closed(&p, &opts.quadrature)?.p_c;
        let est = Simulator::new(p, opts.sim)?.estimate_coverage(opts.n_trials, opts.seed)?;
        worst_z = worst_z.max((est.p_c_hat - a).abs() / est.stderr);
        analytic.push(a);
    }
    let increasing = analytic.windows(2).all(|w| w[1] > w[0]);
    let values: Vec<String> = analytic.iter().map(|v| format!("{v:.5}")).collect();
    Ok(check(
        4,
        "coverage increases with pico intensity",
        increasing && worst_z <= 3.0,
        format!(
            "analytic [{}], worst simulation deviation {worst_z:.2} stderr",
            values.join(", ")
        ),
    ))
}

/// KS tests of the sampled macro and pico distances.
pub fn distance_laws(opts: &ValidationOptions) -> Result<Check> {
    let params = SystemParams::default();
    let geom = CellGeometry::new(params.d)?;
    let n = opts.n_trials;
    let mut r1 = Vec::with_capacity(n as usize);
    let mut r2 = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut rng = derive_stream(opts.seed, i);
        r1.push(nearest_macro_distance(
            &sample_user_position(&geom, &mut rng),
            &geom,
        )?);
        r2.push(sample_nearest_pico_distance(params.lambda2, &mut rng)?);
    }
    let d = params.d;
    let lambda2 = params.lambda2;
    let ks1 = ks_statistic(&mut r1, |r| f1_cdf(r, d));
    let ks2 = ks_statistic(&mut r2, |r| {
        1.0 - (-std::f64::consts::PI * lambda2 * r * r).exp()
    });
    let crit = ks_critical_1pct(n as usize);
    Ok(check(
        5,
        "distance laws pass KS at 1%",
        ks1 < crit && ks2 < crit,
        format!("D(r1) = {ks1:.5}, D(r2) = {ks2:.5}, critical {crit:.5}"),
    ))
}

/// Conditional link success against the interference Laplace transform, and
/// stability under doubling the truncation radius.
pub fn interference_law(opts: &ValidationOptions) -> Result<Check> {
    let params = SystemParams::default();
    let sim = Simulator::new(params, opts.sim)?;
    let mut passed = true;
    let mut parts = Vec::new();
    for (k, r) in [1.0, 3.0, 5.0, 8.0].into_iter().enumerate() {
        let exact = laplace_success_prob(r, params.t1, params.lambda0, params.alpha)?;
        let c = sim.conditional_success(
            r,
            params.t1,
            opts.n_trials,
            opts.seed.wrapping_add(k as u64),
        )?;
        let se = c.truncated.stderr;
        let z = (c.truncated.p_hat - exact).abs() / se;
        let shift = (c.doubled_radius.p_hat - c.truncated.p_hat).abs();
        passed &= z <= 3.0 && shift < se;
        parts.push(format!(
            "r={r}: {:.5} vs {exact:.5} ({z:.2} se, radius shift {:.2} se)",
            c.truncated.p_hat,
            shift / se
        ));
    }
    Ok(check(
        6,
        "conditional success matches interference law",
        passed,
        format!("R = {:.1}; {}", sim.interferer_radius(), parts.join("; ")),
    ))
}

/// Zero thresholds, no pico tier, and zero offset.
pub fn degenerate_limits(opts: &ValidationOptions) -> Result<Check> {
    let base = SystemParams::default();
    let cfg = &opts.quadrature;
    let free = SystemParams {
        t1: 0.0,
        t2: 0.0,
        ..base
    };
    let analytic = coverage_closed(&free, cfg)?.p_c;
    let empirical = Simulator::new(free, opts.sim)?
        .estimate_coverage(opts.n_trials.min(10_000), opts.seed)?
        .p_c_hat;
    let no_pico = p_psuc_closed(
        &SystemParams {
            lambda2: 0.0,
            ..base
        },
        cfg,
    )?;
    let no_offset = p_psuc_closed(&SystemParams { delta: 0.0, ..base }, cfg)?;
    let no_offset_assoc =
        1.0 - macro_association_probability(&SystemParams { delta: 0.0, ..base }, cfg)?;
    let passed = (analytic - 1.0).abs() <= 1e-9
        && empirical == 1.0
        && no_pico <= 1e-9
        && no_offset <= 1e-9
        && no_offset_assoc <= 1e-9;
    Ok(check(
        7,
        "degenerate limits",
        passed,
        format!(
            "T=0: analytic {analytic}, simulated {empirical}; lambda2=0: p_psuc {no_pico:e}; delta=0: p_psuc {no_offset:e}"
        ),
    ))
}

fn or_failed(id: u32, name: &'static str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| check(id, name, false, format!("error: {e}")))
}

/// Runs checks 1 to 7.
pub fn run_all(opts: &ValidationOptions) -> Vec<Check> {
    vec![
        or_failed(
            1,
            "closed forms match quadrature oracles",
            oracle_equivalence(&opts.quadrature),
        ),
        or_failed(
            2,
            "analytic coverage matches simulation",
            analytic_vs_simulation(opts),
        ),
        or_failed(
            3,
            "offset sweep peaks at 20 dB",
            offset_sweep_shape(&opts.quadrature),
        ),
        or_failed(
            4,
            "coverage increases with pico intensity",
            pico_intensity_trend(opts),
        ),
        or_failed(5, "distance laws pass KS at 1%", distance_laws(opts)),
        or_failed(
            6,
            "conditional success matches interference law",
            interference_law(opts),
        ),
        or_failed(7, "degenerate limits", degenerate_limits(opts)),
    ]
}
