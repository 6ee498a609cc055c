//! Inspection path planning for a multi-UAV camera formation.
//!
//! The pipeline turns a structure mesh into an ordered list of formation
//! waypoints:
//!
//! 1. [`geometry_io`] loads and cleans the mesh.
//! 2. [`formation`] derives the formation footprint and viewpoint spacing
//!    from camera intrinsics and overlaps.
//! 3. [`viewpoints`] slices the mesh, clusters the cuts and offsets them by
//!    the working distance.
//! 4. [`pathcost`] builds the anisotropic cost matrix.
//! 5. [`aco`] orders the viewpoints with ant colony optimization;
//!    [`baf`] gives the back-and-forth baseline and [`oracle`] the exact
//!    optimum on small instances.
//!
//! Everything numeric is generic over [`Scalar`]; the aliases below fix the
//! common `f64` instantiation.

// `!(x > 0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aco;
pub mod baf;
pub mod error;
pub mod formation;
pub mod geom;
pub mod geometry_io;
pub mod oracle;
pub mod pathcost;
pub mod scalar;
pub mod synthetic;
pub mod viewpoints;

pub use error::{PlanError, Result};
pub use scalar::Scalar;

pub type Point = geom::Vec3<f64>;
pub type Mesh = geometry_io::TriangleMesh<f64>;
pub type Camera = formation::CameraSpec<f64>;
pub type Formation = formation::FormationSpec<f64>;
pub type Spacing = formation::SpacingSpec<f64>;
pub type Viewpoints = viewpoints::ViewpointSet<f64>;
pub type Costs = pathcost::CostMatrix<f64>;
pub type Weights = pathcost::CostWeights<f64>;
pub type Params = aco::AcoParams<f64>;
pub type Solution = aco::AcoResult<f64>;

pub type Mesh32 = geometry_io::TriangleMesh<f32>;
pub type Costs32 = pathcost::CostMatrix<f32>;
pub type Params32 = aco::AcoParams<f32>;
