//! Convex hulls of planar self-similar sets.
//!
//! The hull `K̃ = H(K)` of the attractor of a system of contracting
//! similitudes is the unique fixed point of the convexified Hutchinson
//! operator `A ↦ H(∪ φᵢ(A))`. This crate computes it with a certified
//! a-priori error bound, cross-checks it with a support-function solver,
//! and analyzes the structure of its boundary: boundary components `Q_w`,
//! sides and their word factorization, corner points, the open convex set
//! condition, refinement/regularization, and a dimension estimator for the
//! set of extreme points.

pub mod boundary;
pub mod config;
pub mod convex;
pub mod emit;
mod error;
pub mod hutchinson;
pub mod ocsc;
mod point;
pub mod similitude;
pub mod support_solver;

pub use crate::error::{Error, Result};
pub use crate::point::Point;

pub use crate::boundary::{BoundaryComponent, Corner, DimensionEstimate, Side, SideOrigin};
pub use crate::config::{parse_config, IfsConfig};
pub use crate::convex::{ConvexBody, DirectionSet};
pub use crate::hutchinson::{AttractorHull, HullCertificate};
pub use crate::ocsc::{OcscReport, RegularizationReport};
pub use crate::similitude::{AddressWord, Angle, IfsSystem, Similitude};
pub use crate::support_solver::SupportVector;

/// Relative geometric tolerance for collinearity, duplicate-vertex and
/// contact decisions. Multiply by the diameter of the body at hand.
pub const EPS_GEOM: f64 = 1e-9;

/// Angular tolerance (radians) for grouping hull edges into sides.
pub const EPS_ANGLE: f64 = 1e-7;
