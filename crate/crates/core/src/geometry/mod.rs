//! Dimension-generic convex geometry: planar polygons, half-space
//! polytopes and a small feasibility solver.

pub mod lp;
pub mod polygon;
pub mod polytope;
mod vec2;

pub use lp::{lp_feasible, Feasibility, FeasibilityProblem};
pub use polygon::{
    clip_halfplane, contains_point, intersect_halfplanes, minkowski_sum, polygon_area,
    regular_constraint_halfplanes, regular_constraint_polygon, ConvexPolygon2D, HalfPlane2D,
};
pub use polytope::{enumerate_polytope_vertices, hull_facets, HalfSpace};
pub use vec2::Vec2;

/// Tolerance for geometric predicates (membership, on-line tests).
pub const PREDICATE_TOL: f64 = 1e-9;
/// Distance below which two enumerated vertices are the same point.
pub const DEDUP_TOL: f64 = 1e-7;
