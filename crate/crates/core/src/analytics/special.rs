//! Gaussian tail and the half-integer incomplete gamma function.

use std::f64::consts::{PI, SQRT_2};

/// Standard normal tail probability `Q(x) = P(Z > x)`.
///
/// Backed by the correctly-rounded-to-within-an-ulp `erfc` from `libm`, so the
/// absolute error is far below `1e-10` over the whole real line.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `1 - 2 Q(y)`, evaluated as `erf(y / sqrt 2)` to keep relative accuracy
/// when `y` is small.
pub fn one_minus_two_q(y: f64) -> f64 {
    libm::erf(y / SQRT_2)
}

/// `Gamma(1/2, x)` through `Gamma(1/2, t^2) = 2 sqrt(pi) Q(sqrt(2) t)`.
pub fn upper_incomplete_gamma_half(x: f64) -> f64 {
    if x < 0.0 {
        return f64::NAN;
    }
    2.0 * PI.sqrt() * q_function((2.0 * x).sqrt())
}

/// `Gamma(3/2, x) = Gamma(1/2, x) / 2 + sqrt(x) e^-x`.
///
/// Returns NaN for negative `x`.
pub fn upper_incomplete_gamma_3half(x: f64) -> f64 {
    if x < 0.0 {
        return f64::NAN;
    }
    0.5 * upper_incomplete_gamma_half(x) + x.sqrt() * (-x).exp()
}
