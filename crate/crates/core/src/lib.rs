//! Gaussian curvature and level-set topology of graphs of harmonic
//! functions `u = Re P`, `v = Im P` for complex polynomials `P`.
//!
//! The curvature of such a graph is `K = -|P''|^2 / (1 + |P'|^2)^2`. The
//! crate evaluates it two independent ways, locates flat and critical
//! points, tests Gauss–Lucas containment, computes a fiber signature that
//! can certify two harmonic functions topologically inequivalent, and
//! decides when two polynomial graphs have identical curvature.

pub mod cli;
pub mod critical;
pub mod curvature;
pub mod equivalence;
pub mod error;
pub mod hull;
pub mod io;
pub mod poly;
pub mod roots;
pub mod svg;
pub mod tolerance;
pub mod topology;

pub use num_complex::Complex64;

pub use critical::{
    critical_points, flat_set_bound_check, gauss_lucas_report, CriticalKind, CriticalPoint, GaussLucasReport,
};
pub use curvature::{
    curvature_at, curvature_grid, curvature_hessian_at, default_domain, first_form_at, flat_points, CurvatureField,
    CurvatureGrid, Domain2D, FirstForm,
};
pub use equivalence::{
    decide_equal_curvature, loop_scan, numeric_curvature_compare, Certificate, EquivalenceVerdict, LoopSample,
    Witness,
};
pub use error::{Error, Result};
pub use hull::{convex_hull, point_in_hull, ConvexHull2D};
pub use poly::{ComplexPoly, HarmonicJet, Part};
pub use roots::{roots, Root, RootSet};
pub use tolerance::Tolerances;
pub use topology::{
    fiber_signature, level_components, same_fiber, signatures_equivalent, FiberRelation, FiberSignature,
    LevelComponent,
};
