//! Length, width, inradius and horizon computations for curves in the plane
//! and in 3-space, together with the helical and tetrahedral constructions
//! that realize small length-to-width ratios.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod convex;
pub mod curve;
pub mod error;
pub mod format;
pub mod geom;
pub mod horizon;
pub mod integral;
pub mod metrics;
pub mod optimize;
pub mod quadrature;

pub use convex::{hull, min_distance_to_curve, ConvexHull3, Facet, HullKind};
pub use curve::{Curve, ParamPoint, PiecewiseCurve, PolyCurve, Segment};
pub use error::{Error, Result};
pub use geom::{Direction3, Isometry, Mat3, Point3};
