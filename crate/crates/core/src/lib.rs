//! Two-phase shadow-vertex simplex for smoothed linear programs.
//!
//! The solver lifts `max <z, x>, A x <= b` to a unit program, finds an initial
//! facet by adding a random simplex of constraints, and walks facets of the
//! polar polytope while the objective rotates in a fixed plane. Alongside it
//! live brute-force oracles, planar-section counting for random polytopes,
//! and the experiment harness used to measure pivot growth.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod experiment;
pub mod geometry;
pub mod interpolate;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod phase1;
pub mod randgen;
pub mod sections;
pub mod shadow_walk;
pub mod verify;

pub use error::{GeometryError, Singular};
pub use geometry::{FacetIndexSet, PointSet, Tolerance};
pub use interpolate::{solve_lp, GeneralLP, LPResult, LpStatus, SolveError};
pub use phase1::{solve_unit, SolverOptions, UnitResult, UnitStatus};
pub use shadow_walk::{SweepPlane, WalkOptions, WalkOutcome, WalkStatus};
