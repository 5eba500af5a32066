//! Beta-skeleton proximity graphs of planar point sets.
//!
//! - [`geometry`]: lune and half-plane strip predicates.
//! - [`skeleton`]: naive and grid-indexed construction, incremental insertion,
//!   connectivity and stability tests, point and edge file formats.
//! - [`growth`]: polar-spiral growth of point sets whose skeleton stays
//!   connected for a fixed beta.
//! - [`metrics`]: degree, length, diameter and Randić statistics.
//! - [`experiments`]: random sets, edge-loss sweeps, power-law fits and growth
//!   sweeps.
//! - [`render`]: SVG output.
//! - [`config`]: `key = value` configuration files.

pub mod config;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod growth;
pub mod metrics;
pub mod render;
pub mod skeleton;

pub use error::{Error, Result};
pub use geometry::{limit_strip_contains, lune_contains, lune_of, Boundary, Lune, LuneTest, Point, Tolerance};
pub use growth::{grow, try_candidate, Decision, GrowthConfig, GrowthEvent, GrowthTrace};
pub use metrics::{compute_metrics, randic_index, MetricsReport, RandicConvention};
pub use skeleton::{
    build_indexed, build_naive, insert_point, is_connected, is_stable, ConnectivityMode, GridIndex,
    InsertionDelta, PointSet, SkeletonGraph,
};
