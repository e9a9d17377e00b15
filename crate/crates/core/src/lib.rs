//! Uplink coverage probability of a two-tier (macro + pico) cellular network
//! with cell range expansion.
//!
//! Macro base stations sit on a hexagonal grid of radius `d`; pico base
//! stations and users form independent homogeneous Poisson point processes.
//! A user associates with its closest macro BS unless the biased pico power
//! `P2 * delta * r2^-alpha` exceeds `P1 * r1^-alpha`. Coverage is the
//! probability that the uplink SINR at the serving BS clears that tier's
//! threshold.
//!
//! The crate provides three views of the same quantity:
//!
//! - [`analytics`]: closed-form expressions for the macro and pico
//!   contributions, together with direct quadrature of the defining integrals
//!   that serves as an independent oracle.
//! - [`montecarlo`]: a trial simulator that realizes user positions, pico
//!   distances, fading and the interfering-user field.
//! - [`validate`]: the invariant suite tying the two together.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod radio;
pub mod stats;
pub mod stochastic;
pub mod validate;

pub use analytics::{CoverageBreakdown, QuadratureConfig};
pub use error::{Error, Result};
pub use geometry::{CellGeometry, Point2D};
pub use montecarlo::{CoverageEstimate, SimConfig, Simulator, TrialOutcome};
pub use radio::{SystemParams, Tier};
pub use stochastic::{derive_stream, PppWindow, RandomSource};
