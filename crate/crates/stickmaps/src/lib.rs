//! Spherical indicatrices of polygonal knots, spherical-polygon duality, and
//! the projection-counting maps they control.
//!
//! Given a closed polygon in general position the crate builds its four
//! spherical indicatrices (tangent, binormal, normal, Darboux), the dual and
//! direct-sum constructions relating them, and evaluates the four counting
//! maps on the sphere of directions — bridge, inflection, tantrix-bridge,
//! tantrix-inflection — each by two independent methods whose agreement is
//! the central correctness property. The graphs of the maps (the curves
//! separating regions of constant value) are constructed explicitly from the
//! indicatrices and verified by sampling, and spherical curve length can be
//! cross-checked by Monte Carlo integration over random great circles.

pub mod duality;
pub mod geometry;
pub mod graphs;
pub mod indicatrix;
pub mod knot;
pub mod maps;

pub use geometry::{
    antipode, arc_length, Arc, CoOrientation, GreatCircle, IntersectionCount, SphericalPolygon,
    UnitVector, Vec3,
};
pub use indicatrix::{FrenetData, Indicatrices};
pub use knot::{PolygonalKnot, ValidationReport};
pub use maps::{MapEvaluator, MapKind, MapSampleReport, Tolerances};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
