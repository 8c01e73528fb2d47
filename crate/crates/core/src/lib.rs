//! Open-path travelling salesman toolkit.
//!
//! A player starts at a fixed position and must pick up every collectible on
//! a flat, unobstructed map; there is no return leg. This crate provides
//!
//! * [`solvers::greedy`]: always walk to the closest remaining item,
//! * [`solvers::greedy_with_error`]: the same rule with each perceived distance
//!   scaled by a truncated-normal misjudgment factor,
//! * [`solvers::exact_exhaustive`] and [`solvers::exact_held_karp`]: exact optima,
//! * [`experiments`]: a seeded Monte Carlo harness measuring how much longer
//!   greedy routes are than optimal ones,
//! * [`io`]: scenario files, results CSV and SVG route plots.
//!
//! The geometry and solvers are generic over [`Scalar`] (`f32` or `f64`).
//! The aliases below fix the scalar to `f64`, which is what the harness and
//! the file formats use.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod noise;
pub mod scalar;
pub mod solvers;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{dist, path_length};
pub use scalar::Scalar;

pub type Point = geometry::Point<f64>;
pub type Instance = geometry::Instance<f64>;
pub type Route = geometry::Route;
pub type SolveResult = geometry::SolveResult<f64>;

pub type PointF32 = geometry::Point<f32>;
pub type InstanceF32 = geometry::Instance<f32>;
pub type SolveResultF32 = geometry::SolveResult<f32>;

/// Crate version, echoed into results metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
