//! Model parameters, path loss, SINR and biased tier selection.

use crate::error::{Error, Result};

/// Pico intensity used for the reference scenario, per unit area.
pub const TABLE_LAMBDA2: f64 = 3.06e-3;
/// User intensity used for the reference scenario, per unit area.
pub const TABLE_LAMBDA0: f64 = 7.66e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Intensity of the user process.
    pub lambda0: f64,
    /// Intensity of the pico BS process.
    pub lambda2: f64,
    /// User transmit power.
    pub p0: f64,
    /// Macro BS power.
    pub p1: f64,
    /// Pico BS power.
    pub p2: f64,
    /// Range-expansion power offset, linear.
    pub delta: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Hexagon radius.
    pub d: f64,
    /// Macro SINR threshold, linear.
    pub t1: f64,
    /// Pico SINR threshold, linear.
    pub t2: f64,
    /// Noise power.
    pub noise: f64,
}

impl Default for SystemParams {
    /// Reference scenario: P1/P2 = 100, delta = P1/P2 (20 dB), alpha = 4,
    /// unit thresholds, no noise.
    fn default() -> Self {
        Self {
            lambda0: TABLE_LAMBDA0,
            lambda2: TABLE_LAMBDA2,
            p0: 1.0,
            p1: 100.0,
            p2: 1.0,
            delta: 100.0,
            alpha: 4.0,
            d: 50.0 / 3f64.sqrt(),
            t1: 1.0,
            t2: 1.0,
            noise: 0.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("lambda0", self.lambda0),
            ("lambda2", self.lambda2),
            ("p0", self.p0),
            ("p1", self.p1),
            ("p2", self.p2),
            ("delta", self.delta),
            ("alpha", self.alpha),
            ("d", self.d),
            ("t1", self.t1),
            ("t2", self.t2),
            ("noise", self.noise),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "{name} must be finite, got {v}"
            )));
        }
        let checks = [
            (self.alpha > 2.0, "alpha must exceed 2"),
            (self.p2 > 0.0, "p2 must be positive"),
            (self.p1 >= self.p2, "p1 must be at least p2"),
            (self.p0 > 0.0, "p0 must be positive"),
            (self.d > 0.0, "d must be positive"),
            (self.lambda0 > 0.0, "lambda0 must be positive"),
            (self.lambda2 >= 0.0, "lambda2 must be nonnegative"),
            (self.delta >= 0.0, "delta must be nonnegative"),
            (self.t1 >= 0.0, "t1 must be nonnegative"),
            (self.t2 >= 0.0, "t2 must be nonnegative"),
            (self.noise >= 0.0, "noise must be nonnegative"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::InvalidParams((*msg).to_string())),
            None => Ok(()),
        }
    }

    /// `P2 * delta / P1`, the biased pico-to-macro power ratio.
    pub fn bias_ratio(&self) -> f64 {
        self.p2 * self.delta / self.p1
    }

    /// `(P2 delta / P1)^(2/alpha)`: scales pico distances into macro-equivalent
    /// squared distances.
    pub fn bias_area_factor(&self) -> f64 {
        self.bias_ratio().powf(2.0 / self.alpha)
    }
}

/// Converts a decibel offset to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Macro,
    Pico,
}

pub fn path_loss(r: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(
            "path_loss",
            format!("distance must be positive, got {r}"),
        ));
    }
    if !(alpha > 2.0) {
        return Err(Error::domain(
            "path_loss",
            format!("alpha must exceed 2, got {alpha}"),
        ));
    }
    Ok(r.powf(-alpha))
}

/// Path loss from a squared distance, with exact fast paths for the common
/// integer exponents.
#[inline]
pub(crate) fn path_loss_sq(dist_sq: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (dist_sq * dist_sq)
    } else if alpha == 3.0 {
        1.0 / (dist_sq * dist_sq.sqrt())
    } else {
        dist_sq.powf(-0.5 * alpha)
    }
}

/// Macro iff `P1 r1^-alpha >= P2 delta r2^-alpha`; ties go to the macro tier.
pub fn select_tier(r1: f64, r2: f64, params: &SystemParams) -> Result<Tier> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::domain(
            "select_tier",
            format!("distances must be positive, got r1 = {r1}, r2 = {r2}"),
        ));
    }
    let macro_power = params.p1 * r1.powf(-params.alpha);
    let pico_power = params.p2 * params.delta * r2.powf(-params.alpha);
    Ok(if macro_power >= pico_power {
        Tier::Macro
    } else {
        Tier::Pico
    })
}

/// Uplink SINR at the serving BS.
///
/// Returns `+inf` when there is neither interference nor noise.
pub fn sinr(
    serving_distance: f64,
    fading: f64,
    interferer_distances: &[f64],
    interferer_fadings: &[f64],
    params: &SystemParams,
) -> Result<f64> {
    if interferer_distances.len() != interferer_fadings.len() {
        return Err(Error::domain(
            "sinr",
            format!(
                "{} interferer distances but {} fadings",
                interferer_distances.len(),
                interferer_fadings.len()
            ),
        ));
    }
    let signal = fading * params.p0 * path_loss(serving_distance, params.alpha)?;
    let mut interference = 0.0;
    for (&r, &h) in interferer_distances.iter().zip(interferer_fadings) {
        interference += h * params.p0 * path_loss(r, params.alpha)?;
    }
    Ok(sinr_from_parts(signal, interference, params.noise))
}

#[inline]
pub(crate) fn sinr_from_parts(signal: f64, interference: f64, noise: f64) -> f64 {
    let denom = interference + noise;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        signal / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p1_over_p2: f64, delta: f64, alpha: f64) -> SystemParams {
        SystemParams {
            p1: p1_over_p2,
            p2: 1.0,
            delta,
            alpha,
            ..SystemParams::default()
        }
    }

    #[test]
    fn default_is_valid() {
        SystemParams::default().validate().unwrap();
    }

    #[test]
    fn validation_messages() {
        let bad = SystemParams {
            alpha: 2.0,
            ..Default::default()
        };
        assert_eq!(
            bad.validate().unwrap_err(),
            Error::InvalidParams("alpha must exceed 2".into())
        );
        let bad = SystemParams {
            p2: 200.0,
            ..Default::default()
        };
        assert!(bad
            .validate()
            .unwrap_err()
            .to_string()
            .contains("p1 must be at least p2"));
        let bad = SystemParams {
            lambda0: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SystemParams {
            delta: f64::NAN,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let ok = SystemParams {
            lambda2: 0.0,
            delta: 0.0,
            t1: 0.0,
            t2: 0.0,
            ..Default::default()
        };
        ok.validate().unwrap();
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(20.0) - 100.0).abs() < 1e-12);
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(db_to_linear(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn path_loss_examples() {
        assert_eq!(path_loss(1.0, 4.0).unwrap(), 1.0);
        assert_eq!(path_loss(2.0, 4.0).unwrap(), 0.0625);
        assert!((path_loss(10.0, 3.0).unwrap() - 1e-3).abs() < 1e-18);
        assert!(path_loss(0.0, 4.0).is_err());
        assert!(path_loss(-1.0, 4.0).is_err());
        assert!(path_loss(1.0, 2.0).is_err());
    }

    #[test]
    fn squared_path_loss_agrees() {
        for &alpha in &[2.5, 3.0, 3.7, 4.0] {
            for &r in &[0.3, 1.0, 7.5, 300.0] {
                let a = path_loss_sq(r * r, alpha);
                let b = path_loss(r, alpha).unwrap();
                assert!((a - b).abs() <= 1e-13 * b, "alpha {alpha} r {r}");
            }
        }
    }

    #[test]
    fn select_tier_examples() {
        let p = params(100.0, 1.0, 4.0);
        assert_eq!(select_tier(1.0, 1.0, &p).unwrap(), Tier::Macro);
        let p = params(100.0, 100.0, 4.0);
        assert_eq!(select_tier(1.0, 1.0, &p).unwrap(), Tier::Macro);
        assert_eq!(select_tier(2.0, 1.0, &p).unwrap(), Tier::Pico);
        assert!(select_tier(0.0, 1.0, &p).is_err());
        assert!(select_tier(1.0, -1.0, &p).is_err());
        // no pico in range
        assert_eq!(select_tier(5.0, f64::INFINITY, &p).unwrap(), Tier::Macro);
        // zero offset never selects pico
        let p = params(100.0, 0.0, 4.0);
        assert_eq!(select_tier(10.0, 1e-6, &p).unwrap(), Tier::Macro);
    }

    #[test]
    fn sinr_examples() {
        let p = SystemParams {
            p0: 1.0,
            alpha: 4.0,
            noise: 0.0,
            ..Default::default()
        };
        assert!((sinr(1.0, 1.0, &[2.0], &[1.0], &p).unwrap() - 16.0).abs() < 1e-12);
        let p = SystemParams {
            p0: 1.0,
            noise: 1.0,
            ..Default::default()
        };
        assert_eq!(sinr(1.0, 1.0, &[], &[], &p).unwrap(), 1.0);
        let p = SystemParams {
            noise: 0.0,
            ..Default::default()
        };
        assert_eq!(sinr(1.0, 1.0, &[], &[], &p).unwrap(), f64::INFINITY);
        assert!(sinr(1.0, 1.0, &[1.0], &[], &p).is_err());
        assert!(sinr(1.0, 1.0, &[0.0], &[1.0], &p).is_err());
        assert!(sinr(0.0, 1.0, &[], &[], &p).is_err());
    }

    fn interferers() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.1f64..100.0, 0.01f64..5.0), 1..20)
    }

    proptest! {
        #[test]
        fn sinr_scale_invariant_without_noise(
            serving in 0.1f64..50.0,
            h in 0.01f64..5.0,
            ints in interferers(),
            c in 0.01f64..100.0,
            alpha in 2.1f64..6.0,
        ) {
            let p = SystemParams { alpha, noise: 0.0, ..Default::default() };
            let (ds, hs): (Vec<f64>, Vec<f64>) = ints.into_iter().unzip();
            let base = sinr(serving, h, &ds, &hs, &p).unwrap();
            let scaled: Vec<f64> = ds.iter().map(|r| r * c).collect();
            let s = sinr(serving * c, h, &scaled, &hs, &p).unwrap();
            prop_assert!((s - base).abs() <= 1e-9 * base);
        }

        #[test]
        fn sinr_independent_of_p0_without_noise(
            serving in 0.1f64..50.0,
            h in 0.01f64..5.0,
            ints in interferers(),
            p0 in 1e-3f64..1e3,
        ) {
            let (ds, hs): (Vec<f64>, Vec<f64>) = ints.into_iter().unzip();
            let a = sinr(serving, h, &ds, &hs, &SystemParams::default()).unwrap();
            let b = sinr(serving, h, &ds, &hs, &SystemParams { p0, ..Default::default() }).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }

        #[test]
        fn sinr_monotone(
            serving in 0.1f64..50.0,
            h in 0.01f64..5.0,
            ints in interferers(),
            idx in 0usize..20,
            bump in 0.01f64..2.0,
            noise in 1e-9f64..1e-3,
        ) {
            let p = SystemParams { noise, ..Default::default() };
            let (ds, mut hs): (Vec<f64>, Vec<f64>) = ints.into_iter().unzip();
            let base = sinr(serving, h, &ds, &hs, &p).unwrap();
            prop_assert!(sinr(serving, h * (1.0 + bump), &ds, &hs, &p).unwrap() > base);
            let noisier = SystemParams { noise: noise * (1.0 + bump), ..p };
            prop_assert!(sinr(serving, h, &ds, &hs, &noisier).unwrap() < base);
            let i = idx % hs.len();
            hs[i] *= 1.0 + bump;
            prop_assert!(sinr(serving, h, &ds, &hs, &p).unwrap() < base);
        }

        #[test]
        fn nearest_bs_when_offset_equals_power_ratio(
            r1 in 0.01f64..100.0,
            r2 in 0.01f64..100.0,
            p2 in 0.01f64..10.0,
            ratio in 1.0f64..1000.0,
            alpha in 2.1f64..6.0,
        ) {
            // exact ties are covered separately; floating-point rounding of
            // p2 * (p1 / p2) makes near-ties ambiguous
            prop_assume!((r1 - r2).abs() > 1e-9 * r1.max(r2));
            let p1 = p2 * ratio;
            let p = SystemParams { p1, p2, delta: p1 / p2, alpha, ..Default::default() };
            let tier = select_tier(r1, r2, &p).unwrap();
            prop_assert_eq!(tier == Tier::Macro, r1 <= r2);
        }

        #[test]
        fn pico_persists_with_larger_offset(
            r1 in 0.01f64..100.0,
            r2 in 0.01f64..100.0,
            delta in 0.0f64..1e4,
            extra in 0.0f64..1e4,
            alpha in 2.1f64..6.0,
        ) {
            let p = SystemParams { delta, alpha, ..Default::default() };
            if select_tier(r1, r2, &p).unwrap() == Tier::Pico {
                let q = SystemParams { delta: delta + extra, ..p };
                prop_assert_eq!(select_tier(r1, r2, &q).unwrap(), Tier::Pico);
            }
        }
    }

    #[test]
    fn exact_tie_with_representable_ratio() {
        for &(p1, p2) in &[(100.0, 1.0), (8.0, 2.0), (40.0, 0.5)] {
            let p = SystemParams {
                p1,
                p2,
                delta: p1 / p2,
                ..Default::default()
            };
            for &r in &[0.5, 1.0, 3.0, 17.0] {
                assert_eq!(select_tier(r, r, &p).unwrap(), Tier::Macro);
            }
        }
    }
}
