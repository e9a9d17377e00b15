//! Seeded random sources and the point-process samplers used by the
//! simulator.
//!
//! Every Monte Carlo trial draws from its own [`RandomSource`], obtained by
//! [`derive_stream`] from the run seed and the trial index. The derivation is
//! fixed:
//!
//! 1. The 256-bit ChaCha8 key is four consecutive SplitMix64 outputs started
//!    from `seed`, written little-endian.
//! 2. The ChaCha stream number is the trial index.
//!
//! SplitMix64 is a bijection on its first output, so distinct seeds give
//! distinct keys, and distinct indices select disjoint ChaCha streams. Results
//! therefore depend only on `(seed, index)`, never on scheduling.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{Error, Result};
use crate::geometry::Point2D;

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;
const TWO_POW_NEG_52: f64 = 1.0 / (1u64 << 52) as f64;

/// SplitMix64 step: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

pub fn derive_stream(seed: u64, index: u64) -> RandomSource {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    RandomSource {
        seed,
        stream: index,
        rng,
    }
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        derive_stream(seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform on the open interval `(0, 1)`: the 52-bit lattice shifted by
    /// half a step, so neither endpoint is reachable.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 12) as f64 + 0.5) * TWO_POW_NEG_52
    }

    /// Unit-mean exponential (ziggurat).
    #[inline]
    pub fn exp1(&mut self) -> f64 {
        Exp1.sample(&mut self.rng)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Disk on which a stationary point process is realized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PppWindow {
    center: Point2D,
    radius: f64,
}

impl PppWindow {
    pub fn new(center: Point2D, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain(
                "PppWindow::new",
                format!("radius must be positive and finite, got {radius}"),
            ));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Point2D {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// Draws a Poisson variate with the given mean; zero for a nonpositive mean.
pub(crate) fn poisson_count(mean: f64, rng: &mut RandomSource) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    // Poisson::new only fails for nonpositive or absurdly large means.
    let dist = Poisson::new(mean).expect("Poisson mean within sampler range");
    dist.sample(rng) as u64
}

/// Homogeneous Poisson point process of the given intensity on a disk:
/// a Poisson(intensity * area) count followed by i.i.d. uniform points.
pub fn sample_ppp(
    intensity: f64,
    window: &PppWindow,
    rng: &mut RandomSource,
) -> Result<Vec<Point2D>> {
    if !(intensity >= 0.0 && intensity.is_finite()) {
        return Err(Error::domain(
            "sample_ppp",
            format!("intensity must be finite and nonnegative, got {intensity}"),
        ));
    }
    let n = poisson_count(intensity * window.area(), rng);
    let c = window.center();
    let r = window.radius();
    let points = (0..n)
        .map(|_| {
            let rho = r * rng.uniform().sqrt();
            let theta = 2.0 * PI * rng.uniform();
            Point2D::new(c.x + rho * theta.cos(), c.y + rho * theta.sin())
        })
        .collect();
    Ok(points)
}

/// Inverse of `F2(r) = 1 - exp(-lambda2 pi r^2)` evaluated at survival `u`.
pub fn nearest_pico_distance_from_uniform(u: f64, lambda2: f64) -> f64 {
    (-u.ln() / (PI * lambda2)).sqrt()
}

/// Distance from a user to its closest pico BS, by inverse transform.
pub fn sample_nearest_pico_distance(lambda2: f64, rng: &mut RandomSource) -> Result<f64> {
    if !(lambda2 > 0.0 && lambda2.is_finite()) {
        return Err(Error::domain(
            "sample_nearest_pico_distance",
            format!("pico intensity must be positive, got {lambda2}"),
        ));
    }
    Ok(nearest_pico_distance_from_uniform(
        rng.uniform_open(),
        lambda2,
    ))
}

/// Rayleigh power gain: exponential with unit mean.
pub fn sample_fading_power(rng: &mut RandomSource) -> f64 {
    rng.exp1()
}
