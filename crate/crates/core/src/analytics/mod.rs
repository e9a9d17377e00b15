//! Closed-form uplink coverage and the quadrature oracles it is checked
//! against.
//!
//! Coverage splits into a macro part and a pico part. Both reduce to the
//! moment generating functional
//!
//! ```text
//! M(k) = E[exp(-k r1^2)] = int_0^{d/sqrt3} exp(-k r^2) dF1(r)
//! ```
//!
//! of the closest-macro distance:
//!
//! - `P_msuc = M(K)` with `K = C(alpha, lambda0) T1^(2/alpha) + pi lambda2 (P2 delta / P1)^(2/alpha)`;
//! - `P_psuc = (pi lambda2 / s) (1 - M(b))` with
//!   `s = pi lambda2 + C T2^(2/alpha)` and `b = (P2 delta / P1)^(2/alpha) s`,
//!
//! where `C = 2 pi^2 lambda0 / (alpha sin(2 pi / alpha))` is the Laplace
//! exponent of the Rayleigh-faded interference field.
//!
//! The closed forms ([`p_msuc_closed`], [`p_psuc_closed`]) evaluate the
//! integration-by-parts expressions term by term and keep only the overlap
//! integral `int_{d/2}^{d/sqrt3} r^3 acos(d/2r) exp(-k r^2) dr` numeric. The
//! oracles ([`p_msuc_numeric`], [`p_psuc_numeric`]) integrate the density of
//! `r1` directly.
//!
//! In the term-by-term pico expression the overlap term is easily written
//! with a negative sign; expanding `(pi lambda2 / s)(1 - M(b))` gives it a
//! positive one. Both are exposed through [`PsucTerms`]; [`p_psuc_closed`]
//! uses the sign that agrees with the oracle.

mod quadrature;
mod special;

use std::f64::consts::PI;

pub use quadrature::{integrate, QuadratureConfig};
pub use special::{
    one_minus_two_q, q_function, upper_incomplete_gamma_3half, upper_incomplete_gamma_half,
};

use crate::error::{Error, Result};
use crate::geometry::f1_density;
use crate::radio::SystemParams;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Threshold divisor `G` in `(T2 / G)`; unity reproduces the defining double
/// integral.
const G: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageBreakdown {
    pub p_msuc: f64,
    pub p_psuc: f64,
    pub p_c: f64,
}

impl CoverageBreakdown {
    pub fn new(p_msuc: f64, p_psuc: f64) -> Self {
        Self {
            p_msuc,
            p_psuc,
            p_c: p_msuc + p_psuc,
        }
    }
}

/// `2 pi^2 lambda0 / (alpha sin(2 pi / alpha))`.
pub fn interference_constant(lambda0: f64, alpha: f64) -> f64 {
    2.0 * PI * PI * lambda0 / (alpha * (2.0 * PI / alpha).sin())
}

/// Probability that the SINR at distance `r` clears `threshold` in an
/// interference-limited Poisson field of users with Rayleigh fading.
pub fn laplace_success_prob(r: f64, threshold: f64, lambda0: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::domain(
            "laplace_success_prob",
            format!("alpha must exceed 2, got {alpha}"),
        ));
    }
    if !(r >= 0.0 && threshold >= 0.0 && lambda0 > 0.0) {
        return Err(Error::domain(
            "laplace_success_prob",
            format!("need r >= 0, threshold >= 0, lambda0 > 0; got r = {r}, T = {threshold}, lambda0 = {lambda0}"),
        ));
    }
    Ok((-interference_constant(lambda0, alpha) * threshold.powf(2.0 / alpha) * r * r).exp())
}

pub fn k_constant(params: &SystemParams) -> f64 {
    interference_constant(params.lambda0, params.alpha) * params.t1.powf(2.0 / params.alpha)
        + PI * params.lambda2 * params.bias_area_factor()
}

/// Probability that no pico BS out-shouts the closest macro BS at distance `r1`.
pub fn prob_macro_association_given_r1(r1: f64, params: &SystemParams) -> f64 {
    (-PI * params.lambda2 * params.bias_area_factor() * r1 * r1).exp()
}

/// Below this value of `k d^2 / 3` the closed form is replaced by its limit `M = 1`.
const DEGENERATE_K: f64 = 1e-12;

fn is_degenerate(k: f64, d: f64) -> bool {
    k < DEGENERATE_K * 3.0 / (d * d)
}

/// `int_{d/2}^{d/sqrt3} r^3 acos(d / 2r) exp(-k r^2) dr`.
///
/// The integrand has a square-root cusp at `d/2`; if plain subdivision stalls
/// the substitution `r = d / (2 cos theta)` removes it.
pub fn overlap_integral(k: f64, d: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let lo = 0.5 * d;
    let hi = d / SQRT_3;
    let direct = integrate(
        |r| r * r * r * (d / (2.0 * r)).clamp(-1.0, 1.0).acos() * (-k * r * r).exp(),
        lo,
        hi,
        cfg,
    );
    match direct {
        Err(Error::NoConvergence { .. }) => integrate(
            |theta: f64| {
                let c = theta.cos();
                let r = d / (2.0 * c);
                r * r * r * theta * (-k * r * r).exp() * 0.5 * d * theta.sin() / (c * c)
            },
            0.0,
            PI / 6.0,
            cfg,
        ),
        other => other,
    }
}

/// Terms of the closed-form `E[exp(-k r1^2)]`, in expansion order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsucTerms {
    /// `2 pi (1 - e^{-k d^2/3}) / (sqrt3 d^2 k)`
    pub finite_cell: f64,
    /// `-(2 pi / 3 sqrt3) e^{-k d^2/3}`
    pub boundary: f64,
    /// `sqrt(3 pi / (k d^2)) e^{-k d^2/4} (1 - 2 Q(sqrt(k d^2 / 6)))`
    pub gaussian_tail: f64,
    /// `-(8 sqrt3 / d^2) k J(k)`, `J` being [`overlap_integral`]
    pub overlap: f64,
}

impl MsucTerms {
    pub fn sum(&self) -> f64 {
        self.finite_cell + self.boundary + self.gaussian_tail + self.overlap
    }
}

fn closest_macro_mgf_terms(k: f64, d: f64, cfg: &QuadratureConfig) -> Result<MsucTerms> {
    if is_degenerate(k, d) {
        return Err(Error::domain(
            "closest_macro_mgf_terms",
            format!("k = {k} is in the removable-singularity regime"),
        ));
    }
    let kd2 = k * d * d;
    let e3 = (-kd2 / 3.0).exp();
    Ok(MsucTerms {
        finite_cell: 2.0 * PI * -(-kd2 / 3.0).exp_m1() / (SQRT_3 * kd2),
        boundary: -2.0 * PI / (3.0 * SQRT_3) * e3,
        gaussian_tail: (3.0 * PI / kd2).sqrt()
            * (-kd2 / 4.0).exp()
            * one_minus_two_q((kd2 / 6.0).sqrt()),
        overlap: -8.0 * SQRT_3 / (d * d) * k * overlap_integral(k, d, cfg)?,
    })
}

/// Closed-form terms of `P_msuc`. Fails in the `K -> 0` regime, where
/// [`p_msuc_closed`] uses the limit instead.
pub fn p_msuc_terms(params: &SystemParams, cfg: &QuadratureConfig) -> Result<MsucTerms> {
    params.validate()?;
    closest_macro_mgf_terms(k_constant(params), params.d, cfg)
}

pub fn p_msuc_closed(params: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let k = k_constant(params);
    if is_degenerate(k, params.d) {
        return Ok(1.0);
    }
    Ok(closest_macro_mgf_terms(k, params.d, cfg)?.sum())
}

/// `E[exp(-k r1^2)]` by quadrature against the density of `r1`, split at the
/// kink `d/2`.
pub fn closest_macro_mgf_numeric(k: f64, d: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let f = |r: f64| (-k * r * r).exp() * f1_density(r, d);
    Ok(integrate(f, 0.0, 0.5 * d, cfg)? + integrate(f, 0.5 * d, d / SQRT_3, cfg)?)
}

pub fn p_msuc_numeric(params: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    closest_macro_mgf_numeric(k_constant(params), params.d, cfg)
}

/// Probability of associating with the macro tier, averaged over `r1`.
pub fn macro_association_probability(params: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let d = params.d;
    let f = |r: f64| prob_macro_association_given_r1(r, params) * f1_density(r, d);
    Ok(integrate(f, 0.0, 0.5 * d, cfg)? + integrate(f, 0.5 * d, d / SQRT_3, cfg)?)
}

/// Terms of the closed-form `P_psuc`, in expansion order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsucTerms {
    /// `alpha sin(2pi/alpha) lambda2 / S'` with
    /// `S' = 2 pi lambda0 (T2/G)^(2/alpha) + lambda2 alpha sin(2pi/alpha)`
    pub association: f64,
    pub finite_cell: f64,
    pub boundary: f64,
    pub gaussian_tail: f64,
    /// Overlap term written with a leading minus sign:
    /// `-(24 pi lambda2 / (sqrt3 d^2)) (P2 delta / P1)^(2/alpha) J(b)`.
    /// The correct total subtracts it.
    pub overlap_flipped: f64,
}

impl PsucTerms {
    /// Sum with the overlap term's sign corrected; equals the double integral.
    pub fn sum(&self) -> f64 {
        self.association + self.finite_cell + self.boundary + self.gaussian_tail
            - self.overlap_flipped
    }

    /// Sum with the overlap term added instead, which is wrong by twice that
    /// term.
    pub fn sign_flipped_sum(&self) -> f64 {
        self.association
            + self.finite_cell
            + self.boundary
            + self.gaussian_tail
            + self.overlap_flipped
    }
}

/// Exponent rate `b` of the pico closed form and the prefactor `pi lambda2 / s`.
fn pico_rates(params: &SystemParams) -> (f64, f64) {
    let s = PI * params.lambda2
        + interference_constant(params.lambda0, params.alpha)
            * (params.t2 / G).powf(2.0 / params.alpha);
    (params.bias_area_factor() * s, s)
}

/// Closed-form terms of `P_psuc`. Fails when `lambda2 = 0` or the offset is
/// so small that the expression is a removable `0/0`.
pub fn p_psuc_terms(params: &SystemParams, cfg: &QuadratureConfig) -> Result<PsucTerms> {
    params.validate()?;
    let (b, _) = pico_rates(params);
    if params.lambda2 == 0.0 || is_degenerate(b, params.d) {
        return Err(Error::domain(
            "p_psuc_terms",
            "closed form is 0/0 without pico BSs or pico association",
        ));
    }
    let SystemParams {
        lambda0,
        lambda2,
        alpha,
        d,
        t2,
        ..
    } = *params;
    let sin_a = alpha * (2.0 * PI / alpha).sin();
    let t_term = 2.0 * PI * lambda0 * (t2 / G).powf(2.0 / alpha);
    let s_prime = t_term + lambda2 * sin_a;
    let area = params.bias_area_factor();
    let inv_ratio_root = (1.0 / params.bias_ratio()).powf(1.0 / alpha);
    let ratio_root = params.bias_ratio().powf(1.0 / alpha);
    let rate = PI * area * (lambda2 + t_term / sin_a);
    let e3 = (-rate * d * d / 3.0).exp();
    let e4 = (-rate * d * d / 4.0).exp();
    Ok(PsucTerms {
        association: sin_a * lambda2 / s_prime,
        finite_cell: -2.0 * lambda2 / area * sin_a * sin_a / (SQRT_3 * d * d * s_prime * s_prime)
            * -(-rate * d * d / 3.0).exp_m1(),
        boundary: 2.0 * PI * lambda2 * sin_a / (3.0 * SQRT_3 * s_prime) * e3,
        gaussian_tail: -SQRT_3 * lambda2 * sin_a.powf(1.5) * inv_ratio_root
            / (d * s_prime.powf(1.5))
            * e4
            * one_minus_two_q(d * ratio_root * (PI * s_prime / (6.0 * sin_a)).sqrt()),
        overlap_flipped: -24.0 * PI * lambda2 / (SQRT_3 * d * d)
            * area
            * overlap_integral(rate, d, cfg)?,
    })
}

pub fn p_psuc_closed(params: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    let (b, _) = pico_rates(params);
    if params.lambda2 == 0.0 || is_degenerate(b, params.d) {
        return Ok(0.0);
    }
    Ok(p_psuc_terms(params, cfg)?.sum())
}

/// Double integral over `r1` and `r2` with the inner `r2` integral done in
/// closed form:
///
/// ```text
/// int_0^{a r1} exp(-c r^2) dF2(r) = (pi lambda2 / s)(1 - exp(-s a^2 r1^2))
/// ```
pub fn p_psuc_numeric(params: &SystemParams, cfg: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    if params.lambda2 == 0.0 {
        return Ok(0.0);
    }
    let (b, s) = pico_rates(params);
    let d = params.d;
    let weight = PI * params.lambda2 / s;
    let f = |r: f64| weight * -(-b * r * r).exp_m1() * f1_density(r, d);
    Ok(integrate(f, 0.0, 0.5 * d, cfg)? + integrate(f, 0.5 * d, d / SQRT_3, cfg)?)
}

pub fn coverage_closed(params: &SystemParams, cfg: &QuadratureConfig) -> Result<CoverageBreakdown> {
    Ok(CoverageBreakdown::new(
        p_msuc_closed(params, cfg)?,
        p_psuc_closed(params, cfg)?,
    ))
}

pub fn coverage_numeric(
    params: &SystemParams,
    cfg: &QuadratureConfig,
) -> Result<CoverageBreakdown> {
    Ok(CoverageBreakdown::new(
        p_msuc_numeric(params, cfg)?,
        p_psuc_numeric(params, cfg)?,
    ))
}
