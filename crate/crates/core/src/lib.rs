//! Glued polygonal length spaces.
//!
//! Flat convex polygons (or segments) are glued along boundary arcs by
//! arclength isometries. The crate computes the glued distance through a
//! sampled crossing graph, builds the space of directions at boundary
//! classes, and searches for numerical witnesses against a lower curvature
//! bound. The geometric core is generic over the scalar; the verifier,
//! scene files, reports and drawings work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity, clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod kernel;
pub mod links;
pub mod metric;
pub mod model;
pub mod scalar;

pub mod cli;
pub mod report;
pub mod scene;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point = geometry::Point2<f64>;
pub type Spec = model::ComplexSpec<f64>;
pub type Discretized = metric::DiscretizedComplex<f64>;
pub type Geodesic = metric::GeodesicPath<f64>;
pub type Link = links::LinkSpace<f64>;
pub type Place = metric::Location<f64>;
