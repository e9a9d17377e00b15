//! Trial-by-trial simulation of the uplink, independent of the analytic
//! engine.
//!
//! One trial places a user uniformly in the analysis triangle, draws the
//! closest pico distance from its void-probability law, picks the serving tier
//! with the biased power rule, and evaluates the SINR at the serving BS
//! against a freshly drawn Poisson field of interfering users on a disk
//! around that BS.
//!
//! Trial `i` of a run with seed `s` always draws from `derive_stream(s, i)`,
//! and aggregation only adds integer counts, so estimates are bit-identical
//! for any number of workers.
//!
//! # Truncation radius
//!
//! Interferers beyond radius `R` are dropped. For a link of length `r` the
//! dropped field lowers the success probability by at most
//! `P(r) * 2 pi lambda0 T r^alpha R^(2-alpha) / (alpha - 2)` to first order,
//! where `P(r) = exp(-C T^(2/alpha) r^2)`. Maximizing over `r` removes both
//! `r` and `T`:
//!
//! ```text
//! bias <= 2 pi lambda0 (alpha / (2 e C))^(alpha/2) R^(2-alpha) / (alpha - 2)
//! ```
//!
//! The default radius makes this bound equal to
//! [`SimConfig::truncation_tolerance`], with a floor of ten times the longest
//! possible serving distance and a cap on the mean interferer count.

use std::f64::consts::{E, PI};

use rayon::prelude::*;

use crate::analytics::interference_constant;
use crate::error::{Error, Result};
use crate::geometry::{nearest_macro_distance, sample_user_position, CellGeometry};
use crate::radio::{path_loss_sq, select_tier, sinr_from_parts, SystemParams, Tier};
use crate::stats::proportion_stderr;
use crate::stochastic::{
    derive_stream, poisson_count, sample_fading_power, sample_nearest_pico_distance, RandomSource,
};

/// Distances at or below this multiple of `d` are redrawn.
const MIN_DISTANCE_FACTOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Target bound on the coverage bias caused by truncating the
    /// interferer field.
    pub truncation_tolerance: f64,
    /// Explicit interferer-disk radius, overriding the rule.
    pub interferer_radius: Option<f64>,
    /// Upper limit on the mean number of interferers per trial.
    pub max_mean_interferers: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            truncation_tolerance: 1e-4,
            interferer_radius: None,
            max_mean_interferers: 1e5,
            workers: None,
        }
    }
}

impl SimConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub tier: Tier,
    pub r1: f64,
    pub r2: f64,
    pub sinr: f64,
    pub success: bool,
    /// Number of distance draws rejected for falling within `1e-12 d`.
    pub resamples: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub p_c_hat: f64,
    pub stderr: f64,
    pub n_trials: u64,
    pub p_msuc_hat: f64,
    pub p_psuc_hat: f64,
    pub macro_fraction: f64,
    pub resamples: u64,
    pub interferer_radius: f64,
    pub truncation_bias_bound: f64,
}

/// An empirical proportion with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McProbability {
    pub p_hat: f64,
    pub stderr: f64,
    pub successes: u64,
    pub n_trials: u64,
}

impl McProbability {
    fn from_counts(successes: u64, n_trials: u64) -> Self {
        let p_hat = successes as f64 / n_trials as f64;
        Self {
            p_hat,
            stderr: proportion_stderr(p_hat, n_trials),
            successes,
            n_trials,
        }
    }
}

/// Success frequency at a fixed link length, at the truncation radius and at
/// twice that radius with the inner field shared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSuccess {
    pub radius: f64,
    pub truncated: McProbability,
    pub doubled_radius: McProbability,
}

/// First-order bound on the coverage bias from ignoring interferers beyond
/// `radius`.
pub fn truncation_bias_bound(lambda0: f64, alpha: f64, radius: f64) -> f64 {
    let c = interference_constant(lambda0, alpha);
    2.0 * PI * lambda0 * (alpha / (2.0 * E * c)).powf(0.5 * alpha) * radius.powf(2.0 - alpha)
        / (alpha - 2.0)
}

/// Interferer-disk radius chosen by the rule in the module docs.
pub fn interferer_radius(params: &SystemParams, sim: &SimConfig) -> f64 {
    if let Some(r) = sim.interferer_radius {
        return r;
    }
    let SystemParams { lambda0, alpha, .. } = *params;
    let unit = truncation_bias_bound(lambda0, alpha, 1.0);
    let by_bias = (unit / sim.truncation_tolerance).powf(1.0 / (alpha - 2.0));
    let longest_link = params.d / 3f64.sqrt() * params.bias_ratio().powf(1.0 / alpha).max(1.0);
    let floor = 10.0 * longest_link;
    let cap = (sim.max_mean_interferers / (PI * lambda0)).sqrt();
    by_bias.min(cap).max(floor)
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    macro_success: u64,
    pico_success: u64,
    macro_assoc: u64,
    resamples: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            macro_success: self.macro_success + o.macro_success,
            pico_success: self.pico_success + o.pico_success,
            macro_assoc: self.macro_assoc + o.macro_assoc,
            resamples: self.resamples + o.resamples,
        }
    }

    fn from_outcome(t: &TrialOutcome) -> Tally {
        let is_macro = t.tier == Tier::Macro;
        Tally {
            macro_success: (is_macro && t.success) as u64,
            pico_success: (!is_macro && t.success) as u64,
            macro_assoc: is_macro as u64,
            resamples: t.resamples as u64,
        }
    }
}

/// Runs `f` over `0..n` on the requested number of workers.
fn par_map_reduce<T, F, R>(n: u64, workers: Option<usize>, f: F, identity: T, reduce: R) -> T
where
    T: Send + Sync + Copy,
    F: Fn(u64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let job = || (0..n).into_par_iter().map(&f).reduce(|| identity, &reduce);
    match workers {
        Some(w) => match rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
        {
            Ok(pool) => pool.install(job),
            Err(_) => (0..n).map(&f).fold(identity, &reduce),
        },
        None => job(),
    }
}

/// Sum of faded path gains from a Poisson field on the annulus
/// `inner_sq <= |x|^2 < outer_sq`, stopping early once the sum exceeds
/// `limit`. Returns the (possibly partial) sum, whether it exceeded `limit`,
/// and the number of redrawn distances.
fn interference_on_annulus(
    rng: &mut RandomSource,
    lambda0: f64,
    inner_sq: f64,
    outer_sq: f64,
    alpha: f64,
    min_dist_sq: f64,
    limit: f64,
) -> (f64, bool, u32) {
    let count = poisson_count(lambda0 * PI * (outer_sq - inner_sq), rng);
    let span = outer_sq - inner_sq;
    let mut sum = 0.0;
    let mut resamples = 0;
    for _ in 0..count {
        let dist_sq = loop {
            let x = inner_sq + span * rng.uniform_open();
            if x > min_dist_sq {
                break x;
            }
            resamples += 1;
        };
        sum += rng.exp1() * path_loss_sq(dist_sq, alpha);
        if sum > limit {
            return (sum, true, resamples);
        }
    }
    (sum, false, resamples)
}

/// A validated parameter set with its geometry and interferer window.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: SystemParams,
    geom: CellGeometry,
    sim: SimConfig,
    radius: f64,
}

impl Simulator {
    pub fn new(params: SystemParams, sim: SimConfig) -> Result<Self> {
        params.validate()?;
        if !(sim.truncation_tolerance > 0.0) {
            return Err(Error::InvalidParams(
                "truncation tolerance must be positive".into(),
            ));
        }
        if let Some(r) = sim.interferer_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "interferer radius must be positive, got {r}"
                )));
            }
        }
        let geom = CellGeometry::new(params.d)?;
        let radius = interferer_radius(&params, &sim);
        Ok(Self {
            params,
            geom,
            sim,
            radius,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn geometry(&self) -> &CellGeometry {
        &self.geom
    }

    pub fn interferer_radius(&self) -> f64 {
        self.radius
    }

    pub fn truncation_bias_bound(&self) -> f64 {
        truncation_bias_bound(self.params.lambda0, self.params.alpha, self.radius)
    }

    pub fn run_trial(&self, rng: &mut RandomSource) -> TrialOutcome {
        let p = &self.params;
        let min_dist = MIN_DISTANCE_FACTOR * p.d;
        let mut resamples = 0u32;

        let r1 = loop {
            let pos = sample_user_position(&self.geom, rng);
            let r = nearest_macro_distance(&pos, &self.geom)
                .expect("sampled point lies in the triangle");
            if r > min_dist {
                break r;
            }
            resamples += 1;
        };
        let r2 = if p.lambda2 > 0.0 {
            loop {
                let r =
                    sample_nearest_pico_distance(p.lambda2, rng).expect("positive pico intensity");
                if r > min_dist {
                    break r;
                }
                resamples += 1;
            }
        } else {
            f64::INFINITY
        };

        let tier = select_tier(r1, r2, p).expect("distances are positive");
        let (serving, threshold) = match tier {
            Tier::Macro => (r1, p.t1),
            Tier::Pico => (r2, p.t2),
        };
        let signal = sample_fading_power(rng) * p.p0 * path_loss_sq(serving * serving, p.alpha);
        let (field, _, field_resamples) = interference_on_annulus(
            rng,
            p.lambda0,
            0.0,
            self.radius * self.radius,
            p.alpha,
            min_dist * min_dist,
            f64::INFINITY,
        );
        let sinr = sinr_from_parts(signal, p.p0 * field, p.noise);
        TrialOutcome {
            tier,
            r1,
            r2,
            sinr,
            success: sinr >= threshold,
            resamples: resamples + field_resamples,
        }
    }

    /// Outcomes of trials `0..n` in index order.
    pub fn outcomes(&self, n_trials: u64, seed: u64) -> Vec<TrialOutcome> {
        (0..n_trials)
            .map(|i| self.run_trial(&mut derive_stream(seed, i)))
            .collect()
    }

    pub fn estimate_coverage(&self, n_trials: u64, seed: u64) -> Result<CoverageEstimate> {
        if n_trials == 0 {
            return Err(Error::InvalidParams("n_trials must be at least 1".into()));
        }
        let tally = par_map_reduce(
            n_trials,
            self.sim.workers,
            |i| Tally::from_outcome(&self.run_trial(&mut derive_stream(seed, i))),
            Tally::default(),
            Tally::merge,
        );
        let n = n_trials as f64;
        let p_msuc_hat = tally.macro_success as f64 / n;
        let p_psuc_hat = tally.pico_success as f64 / n;
        let p_c_hat = p_msuc_hat + p_psuc_hat;
        Ok(CoverageEstimate {
            p_c_hat,
            stderr: proportion_stderr(p_c_hat, n_trials),
            n_trials,
            p_msuc_hat,
            p_psuc_hat,
            macro_fraction: tally.macro_assoc as f64 / n,
            resamples: tally.resamples,
            interferer_radius: self.radius,
            truncation_bias_bound: self.truncation_bias_bound(),
        })
    }

    /// Success frequency of a link of fixed length `r_fixed` against
    /// `threshold`, at the truncation radius and at twice that radius.
    ///
    /// The doubled-radius field is the truncated field plus an independent
    /// annulus, so the two estimates differ only through trials whose outcome
    /// the annulus flips.
    pub fn conditional_success(
        &self,
        r_fixed: f64,
        threshold: f64,
        n_trials: u64,
        seed: u64,
    ) -> Result<ConditionalSuccess> {
        if !(r_fixed > 0.0) {
            return Err(Error::domain(
                "conditional_success_mc",
                format!("r must be positive, got {r_fixed}"),
            ));
        }
        if !(threshold >= 0.0) {
            return Err(Error::domain(
                "conditional_success_mc",
                format!("threshold must be nonnegative, got {threshold}"),
            ));
        }
        if n_trials == 0 {
            return Err(Error::InvalidParams("n_trials must be at least 1".into()));
        }
        let p = self.params;
        let r_sq = self.radius * self.radius;
        let min_dist_sq = (MIN_DISTANCE_FACTOR * p.d).powi(2);
        let trial = |i: u64| -> (u64, u64) {
            if threshold == 0.0 {
                return (1, 1);
            }
            let mut rng = derive_stream(seed, i);
            let signal = sample_fading_power(&mut rng) * path_loss_sq(r_fixed * r_fixed, p.alpha);
            // success iff P0 * I <= signal * P0 / T - N
            let limit = (signal * p.p0 / threshold - p.noise) / p.p0;
            if limit < 0.0 {
                return (0, 0);
            }
            let (inner, exceeded, _) = interference_on_annulus(
                &mut rng,
                p.lambda0,
                0.0,
                r_sq,
                p.alpha,
                min_dist_sq,
                limit,
            );
            if exceeded {
                return (0, 0);
            }
            let (_, exceeded, _) = interference_on_annulus(
                &mut rng,
                p.lambda0,
                r_sq,
                4.0 * r_sq,
                p.alpha,
                min_dist_sq,
                limit - inner,
            );
            (1, (!exceeded) as u64)
        };
        let (near, far) = par_map_reduce(n_trials, self.sim.workers, trial, (0, 0), |a, b| {
            (a.0 + b.0, a.1 + b.1)
        });
        Ok(ConditionalSuccess {
            radius: self.radius,
            truncated: McProbability::from_counts(near, n_trials),
            doubled_radius: McProbability::from_counts(far, n_trials),
        })
    }
}

fn check_geometry(params: &SystemParams, geom: &CellGeometry) -> Result<()> {
    if geom.d() != params.d {
        return Err(Error::InvalidParams(format!(
            "geometry radius {} does not match parameter d = {}",
            geom.d(),
            params.d
        )));
    }
    Ok(())
}

/// One trial with the default interferer window.
pub fn run_trial(
    params: &SystemParams,
    geom: &CellGeometry,
    rng: &mut RandomSource,
) -> Result<TrialOutcome> {
    check_geometry(params, geom)?;
    Ok(Simulator::new(*params, SimConfig::default())?.run_trial(rng))
}

pub fn estimate_coverage(
    params: &SystemParams,
    geom: &CellGeometry,
    n_trials: u64,
    seed: u64,
) -> Result<CoverageEstimate> {
    check_geometry(params, geom)?;
    Simulator::new(*params, SimConfig::default())?.estimate_coverage(n_trials, seed)
}

pub fn conditional_success_mc(
    r_fixed: f64,
    threshold: f64,
    params: &SystemParams,
    n_trials: u64,
    seed: u64,
) -> Result<ConditionalSuccess> {
    Simulator::new(*params, SimConfig::default())?
        .conditional_success(r_fixed, threshold, n_trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::laplace_success_prob;

    fn table() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn radius_rule_at_reference() {
        let p = table();
        let r = interferer_radius(&p, &SimConfig::default());
        let bound = truncation_bias_bound(p.lambda0, p.alpha, r);
        assert!((bound - 1e-4).abs() < 1e-12);
        assert!(r > 250.0 && r < 350.0, "radius {r}");
        let fixed = SimConfig {
            interferer_radius: Some(77.0),
            ..Default::default()
        };
        assert_eq!(interferer_radius(&p, &fixed), 77.0);
    }

    #[test]
    fn radius_rule_respects_floor_and_cap() {
        let p = SystemParams {
            alpha: 2.5,
            ..table()
        };
        let sim = SimConfig::default();
        let r = interferer_radius(&p, &sim);
        let mean = p.lambda0 * PI * r * r;
        assert!((mean - sim.max_mean_interferers).abs() < 1e-6 * mean);
        let p = SystemParams {
            lambda0: 1.0,
            ..table()
        };
        let r = interferer_radius(&p, &sim);
        assert!((r - 10.0 * p.d / 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn trial_is_deterministic() {
        let sim = Simulator::new(table(), SimConfig::default()).unwrap();
        let a = sim.run_trial(&mut derive_stream(17, 4));
        let b = sim.run_trial(&mut derive_stream(17, 4));
        assert_eq!(a, b);
        assert!(a.r1 <= sim.geometry().circumradius());
    }

    #[test]
    fn trial_outcome_consistency() {
        let p = table();
        let sim = Simulator::new(p, SimConfig::default()).unwrap();
        for t in sim.outcomes(500, 3) {
            let threshold = if t.tier == Tier::Macro { p.t1 } else { p.t2 };
            assert_eq!(t.success, t.sinr >= threshold);
            assert_eq!(t.tier, select_tier(t.r1, t.r2, &p).unwrap());
            assert!(t.r1 > 0.0 && t.r1 <= p.d / 3f64.sqrt());
        }
    }

    #[test]
    fn zero_thresholds_always_succeed() {
        let p = SystemParams {
            t1: 0.0,
            t2: 0.0,
            ..table()
        };
        let est = Simulator::new(p, SimConfig::default())
            .unwrap()
            .estimate_coverage(300, 1)
            .unwrap();
        assert_eq!(est.p_c_hat, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn crowded_uplink_fails() {
        let p = SystemParams {
            lambda0: 1000.0 * table().lambda0,
            ..table()
        };
        let est = Simulator::new(p, SimConfig::default())
            .unwrap()
            .estimate_coverage(1000, 2)
            .unwrap();
        assert!(est.p_c_hat < 0.01, "{est:?}");
    }

    #[test]
    fn single_trial_estimate() {
        let est = Simulator::new(table(), SimConfig::default())
            .unwrap()
            .estimate_coverage(1, 9)
            .unwrap();
        assert!(est.p_c_hat == 0.0 || est.p_c_hat == 1.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.n_trials, 1);
        assert!(Simulator::new(table(), SimConfig::default())
            .unwrap()
            .estimate_coverage(0, 9)
            .is_err());
    }

    #[test]
    fn estimate_invariants() {
        let est = Simulator::new(table(), SimConfig::default())
            .unwrap()
            .estimate_coverage(2000, 5)
            .unwrap();
        assert_eq!(est.p_c_hat, est.p_msuc_hat + est.p_psuc_hat);
        assert_eq!(
            est.stderr,
            (est.p_c_hat * (1.0 - est.p_c_hat) / 2000.0).sqrt()
        );
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let base = Simulator::new(table(), SimConfig::default().with_workers(1)).unwrap();
        let a = base.estimate_coverage(3000, 21).unwrap();
        for w in [2, 8] {
            let s = Simulator::new(table(), SimConfig::default().with_workers(w)).unwrap();
            let b = s.estimate_coverage(3000, 21).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.p_c_hat.to_bits(), b.p_c_hat.to_bits());
        }
    }

    #[test]
    fn no_pico_tier_means_all_macro() {
        let p = SystemParams {
            lambda2: 0.0,
            ..table()
        };
        let est = Simulator::new(p, SimConfig::default())
            .unwrap()
            .estimate_coverage(500, 4)
            .unwrap();
        assert_eq!(est.macro_fraction, 1.0);
        assert_eq!(est.p_psuc_hat, 0.0);
    }

    #[test]
    fn conditional_zero_threshold() {
        let c = conditional_success_mc(5.0, 0.0, &table(), 100, 1).unwrap();
        assert_eq!(c.truncated.p_hat, 1.0);
        assert_eq!(c.doubled_radius.p_hat, 1.0);
        assert!(conditional_success_mc(0.0, 1.0, &table(), 100, 1).is_err());
    }

    #[test]
    fn conditional_matches_laplace_small_sample() {
        let p = table();
        let c = conditional_success_mc(3.0, 1.0, &p, 20_000, 8).unwrap();
        let exact = laplace_success_prob(3.0, 1.0, p.lambda0, p.alpha).unwrap();
        assert!((c.truncated.p_hat - exact).abs() <= 3.0 * c.truncated.stderr);
        assert!(c.doubled_radius.p_hat <= c.truncated.p_hat);
    }

    #[test]
    fn free_functions_check_geometry() {
        let p = table();
        let g = CellGeometry::new(p.d * 2.0).unwrap();
        assert!(run_trial(&p, &g, &mut derive_stream(1, 1)).is_err());
        assert!(estimate_coverage(&p, &g, 10, 1).is_err());
        let g = CellGeometry::new(p.d).unwrap();
        assert!(run_trial(&p, &g, &mut derive_stream(1, 1)).is_ok());
    }
}
