//! Geometry of the analysis triangle and the law of the distance from a
//! uniformly placed user to its closest macro base station.
//!
//! By the symmetry of the hexagonal layout it suffices to consider one
//! equilateral triangle of side `d` with a macro BS on each vertex. A user
//! uniform on that triangle is at most `d / sqrt(3)` (the circumradius) from
//! its closest vertex.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::stochastic::RandomSource;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Equilateral triangle with side `d` and a macro BS at each vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    d: f64,
    vertices: [Point2D; 3],
}

impl CellGeometry {
    pub fn new(d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::domain(
                "CellGeometry::new",
                format!("hexagon radius must be positive and finite, got {d}"),
            ));
        }
        Ok(Self {
            d,
            vertices: [
                Point2D::new(0.0, 0.0),
                Point2D::new(d, 0.0),
                Point2D::new(0.5 * d, 0.5 * SQRT_3 * d),
            ],
        })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn vertices(&self) -> &[Point2D; 3] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        SQRT_3 * self.d * self.d / 4.0
    }

    /// Largest possible distance to the closest vertex.
    pub fn circumradius(&self) -> f64 {
        self.d / SQRT_3
    }

    pub fn centroid(&self) -> Point2D {
        let [a, b, c] = self.vertices;
        Point2D::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    /// Signed-area test with slack `tol` (in length units) on every edge.
    pub fn contains(&self, p: &Point2D, tol: f64) -> bool {
        let v = &self.vertices;
        (0..3).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % 3];
            let ex = b.x - a.x;
            let ey = b.y - a.y;
            // distance of p to the left of edge a->b (vertices are counter-clockwise)
            let cross = ex * (p.y - a.y) - ey * (p.x - a.x);
            cross / self.d >= -tol
        })
    }

    /// Maps two uniforms onto the triangle:
    /// `(1 - sqrt(u)) V1 + sqrt(u) (1 - v) V2 + sqrt(u) v V3`.
    pub fn point_from_uniforms(&self, u: f64, v: f64) -> Point2D {
        let [a, b, c] = self.vertices;
        let su = u.sqrt();
        let wa = 1.0 - su;
        let wb = su * (1.0 - v);
        let wc = su * v;
        Point2D::new(
            wa * a.x + wb * b.x + wc * c.x,
            wa * a.y + wb * b.y + wc * c.y,
        )
    }
}

/// Area of the part of the triangle within distance `r` of some vertex.
///
/// Below `d/2` the three 60-degree sectors are disjoint. Above it each pair of
/// neighbouring sectors overlaps in half a lens, which is subtracted.
pub fn sector_union_area(r: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain(
            "sector_union_area",
            format!("d must be positive, got {d}"),
        ));
    }
    let r_max = d / SQRT_3;
    if !(r >= 0.0 && r <= r_max * (1.0 + 1e-12)) {
        return Err(Error::domain(
            "sector_union_area",
            format!("r = {r} outside [0, d/sqrt(3)] for d = {d}"),
        ));
    }
    let sectors = 3.0 * PI * r * r / 6.0;
    if r <= 0.5 * d {
        return Ok(sectors);
    }
    let half_lens =
        r * r * clamped_acos(d / (2.0 * r)) - 0.5 * d * (r * r - 0.25 * d * d).max(0.0).sqrt();
    Ok(sectors - 3.0 * half_lens)
}

/// CDF of the distance to the closest macro BS, clamped to `[0, 1]` outside
/// the support `(0, d/sqrt(3)]`.
pub fn f1_cdf(r: f64, d: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let r_max = d / SQRT_3;
    if r >= r_max {
        return 1.0;
    }
    let x = r / d;
    let disjoint = 2.0 * PI / SQRT_3 * x * x;
    if r <= 0.5 * d {
        disjoint
    } else {
        disjoint
            - (4.0 * SQRT_3 * x * x * clamped_acos(d / (2.0 * r))
                - (12.0 * r * r - 3.0 * d * d).max(0.0).sqrt() / d)
    }
}

/// Density of the closest-macro distance on the open support `(0, d/sqrt(3))`.
pub fn f1_pdf(r: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) || !(r > 0.0 && r < d / SQRT_3) {
        return Err(Error::domain(
            "f1_pdf",
            format!("r = {r} outside (0, d/sqrt(3)) for d = {d}"),
        ));
    }
    Ok(f1_density(r, d))
}

/// Unchecked density, zero outside the support. The two pieces are
///   `4 pi r / (sqrt(3) d^2)` for `r <= d/2`, and
///   `4 r (pi - 6 acos(d / 2r)) / (sqrt(3) d^2)` above,
/// which agree at `d/2` and vanish at the circumradius.
pub(crate) fn f1_density(r: f64, d: f64) -> f64 {
    if r <= 0.0 || r >= d / SQRT_3 {
        return 0.0;
    }
    let scale = 4.0 * r / (SQRT_3 * d * d);
    if r <= 0.5 * d {
        scale * PI
    } else {
        (scale * (PI - 6.0 * clamped_acos(d / (2.0 * r)))).max(0.0)
    }
}

pub fn sample_user_position(geom: &CellGeometry, rng: &mut RandomSource) -> Point2D {
    let u = rng.uniform();
    let v = rng.uniform();
    geom.point_from_uniforms(u, v)
}

/// Distance from `p` to the closest vertex. Points outside the triangle
/// (beyond `1e-9 d`) are rejected.
pub fn nearest_macro_distance(p: &Point2D, geom: &CellGeometry) -> Result<f64> {
    if !(p.x.is_finite() && p.y.is_finite()) || !geom.contains(p, 1e-9) {
        return Err(Error::domain(
            "nearest_macro_distance",
            format!(
                "point ({}, {}) lies outside the analysis triangle",
                p.x, p.y
            ),
        ));
    }
    let nearest = geom
        .vertices()
        .iter()
        .map(|v| p.distance_sq(v))
        .fold(f64::INFINITY, f64::min)
        .sqrt();
    Ok(nearest.min(geom.circumradius()))
}

fn clamped_acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}
