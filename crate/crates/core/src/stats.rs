//! Goodness-of-fit helpers used by the validation suite.

/// Kolmogorov-Smirnov critical coefficient at the 1% level; the statistic is
/// compared against `KS_COEFF_1PCT / sqrt(n)`.
pub const KS_COEFF_1PCT: f64 = 1.63;

pub fn ks_critical_1pct(n: usize) -> f64 {
    KS_COEFF_1PCT / (n as f64).sqrt()
}

/// One-sample KS statistic `sup |F_n(x) - F(x)|`. Sorts `samples` in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Pearson chi-square statistic of a `bins x bins` contingency table built
/// from paired values in `[0, 1)`, testing independence of the two
/// coordinates. Degrees of freedom are `(bins - 1)^2`.
pub fn chi_square_independence(pairs: &[(f64, f64)], bins: usize) -> f64 {
    let mut table = vec![0usize; bins * bins];
    for &(a, b) in pairs {
        let i = ((a * bins as f64) as usize).min(bins - 1);
        let j = ((b * bins as f64) as usize).min(bins - 1);
        table[i * bins + j] += 1;
    }
    let n = pairs.len() as f64;
    let rows: Vec<f64> = (0..bins)
        .map(|i| (0..bins).map(|j| table[i * bins + j] as f64).sum())
        .collect();
    let cols: Vec<f64> = (0..bins)
        .map(|j| (0..bins).map(|i| table[i * bins + j] as f64).sum())
        .collect();
    let mut stat = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            let expected = rows[i] * cols[j] / n;
            if expected > 0.0 {
                let diff = table[i * bins + j] as f64 - expected;
                stat += diff * diff / expected;
            }
        }
    }
    stat
}

/// Binomial standard error of a proportion.
pub fn proportion_stderr(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}
