//! Infinite families of smooth open and closed shapes built from ordered
//! landmark sets.
//!
//! Given `N` ordered points in `R^D` (the landmarks), a smooth box kernel
//! turns them into a one-parameter family of curves: at small smoothing
//! scale `κ` the curve interpolates the landmarks, at large `κ` it
//! collapses onto their centroid, and at every scale the curve stays inside
//! the convex hull of the landmarks because each evaluated point is a
//! convex combination of them. Families compose into scenes blended by a
//! second smoothing parameter.
//!
//! - [`bkernel`] — the exact box kernel, its smooth surrogate and the
//!   periodic variant, with their algebraic identities.
//! - [`shape`] — landmark sets and family evaluation (points, weight
//!   certificates, sampling, linear transforms).
//! - [`scene`] — hierarchical composition of families.
//! - [`generators`] — landmark constructors: polygons, stars, a
//!   space-filling substitution system, logistic-map series, a Lorenz
//!   trajectory, a trefoil knot, seeded random sets.
//! - [`geometry`] — convex hulls, containment certificates and projected
//!   crossing counts.
//! - [`io`] — landmark/curve/scene file formats.
//! - [`svg`] — deterministic figure rendering.

pub mod bkernel;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod scene;
pub mod shape;
pub mod svg;

pub use generators::GeneratorSpec;
pub use geometry::{ConvexHull2D, Crossing, CrossingReport};
pub use scene::{FamilyMember, Scene, SceneMember, SceneTopology};
pub use shape::{
    CurveSample, EvalResult, KappaFamily, LandmarkSet, Quality, SampledCurve, Topology,
};
