//! Geodesic closest-point projections on simply connected surfaces of
//! constant curvature, with numerical checks of their transversality and
//! regularity and experiments on how projections change dimension.
//!
//! * [`geometry`]: distances and projections onto geodesic lines through a
//!   base point, in geodesic polar coordinates, for `K < 0`, `K = 0`, `K > 0`.
//! * [`transversality`]: the `D cos(theta - theta_hat)` decomposition of
//!   projection differences, sampled constants and the derivative checks.
//! * [`fractal`]: self-similar test sets pushed onto the surface.
//! * [`dimension`]: box-counting dimension and covered length.
//! * [`sphere`]: the set-valued projection on the whole sphere.
//! * [`harness`]: angle sweeps, reports and the sphere counterexample.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dimension;
pub mod error;
pub mod fractal;
pub mod geometry;
pub mod harness;
pub mod sampling;
pub mod scalar;
pub mod sphere;
pub mod transversality;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SurfaceModel = geometry::SurfaceModel<f64>;
pub type SurfacePoint = geometry::SurfacePoint<f64>;
pub type GeodesicAngle = geometry::GeodesicAngle<f64>;
pub type ProjectionResult = geometry::ProjectionResult<f64>;
pub type PairGeometry = transversality::PairGeometry<f64>;
pub type Decomposition = transversality::Decomposition<f64>;
pub type TransversalityReport = transversality::TransversalityReport<f64>;
pub type IfsSpec = fractal::IfsSpec<f64>;
pub type PointCloud = fractal::PointCloud<f64>;
pub type DimensionEstimate = dimension::DimensionEstimate<f64>;
pub type MeasureEstimate = dimension::MeasureEstimate<f64>;
pub type AmbientPoint = sphere::AmbientPoint<f64>;
pub type SphereFrame = sphere::SphereFrame<f64>;
pub type AngleSet = sphere::AngleSet<f64>;

pub type SurfaceModelF32 = geometry::SurfaceModel<f32>;
pub type SurfacePointF32 = geometry::SurfacePoint<f32>;
pub type GeodesicAngleF32 = geometry::GeodesicAngle<f32>;
