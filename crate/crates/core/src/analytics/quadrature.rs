//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error falls below `rel_tol * |result|` or the subdivision budget runs out.
//! Error estimates use the QUADPACK rescaling.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_subdiv: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_subdiv: 200,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "quadrature rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_subdiv == 0 {
            return Err(Error::InvalidParams(
                "quadrature max_subdiv must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !(res_k.is_finite() && res_abs.is_finite()) {
        return Err(Error::domain(
            "integrate",
            format!("integrand is not finite on [{a}, {b}]"),
        ));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error(
            (res_k - res_g) * half,
            res_abs * abs_half,
            res_asc * abs_half,
        ),
    })
}

/// Integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::domain(
            "integrate",
            format!("need finite bounds with a <= b, got [{a}, {b}]"),
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut segments = vec![gauss_kronrod_21(&f, a, b)?];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= cfg.rel_tol * total.abs() {
            return Ok(total);
        }
        if segments.len() >= cfg.max_subdiv {
            return Err(Error::NoConvergence {
                a,
                b,
                estimate: total,
                error,
                subdivisions: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            // interval cannot be split further in floating point
            return Err(Error::NoConvergence {
                a,
                b,
                estimate: total,
                error,
                subdivisions: segments.len() + 1,
            });
        }
        segments.push(gauss_kronrod_21(&f, seg.a, mid)?);
        segments.push(gauss_kronrod_21(&f, mid, seg.b)?);
    }
}
