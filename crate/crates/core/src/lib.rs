//! Planar convex-body analysis built on an exact rational kernel.
//!
//! The crate computes middle hedgehogs (the locus of midpoints of affine
//! diameters) of convex bodies, classifies their corners, enumerates and
//! verifies convexity points, and perturbs polygons so that the convex hull
//! of the hedgehog gains vertices while the polygon stays inside a given
//! neighborhood of a body.

pub mod body;
pub mod convexity;
pub mod error;
pub mod hedgehog;
pub mod io;
pub mod kernel;
pub mod perturb;

pub use error::GeoError;
pub use kernel::{Hull, HullPolygon, P2, Rat, Rat2, Segment};
