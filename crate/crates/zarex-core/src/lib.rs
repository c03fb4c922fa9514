//! Extremal functions for forbidden 0-1 submatrices and for forbidden
//! planar point patterns realized over open grid regions.
//!
//! The crate computes two families of quantities at desk scale, with all
//! arithmetic exact:
//!
//! * `ex(n, M, d)` — the maximum number of ones in a d-dimensional
//!   n-per-axis 0-1 matrix avoiding a forbidden matrix `M`
//!   ([`solver`]), by branch and bound, seeded heuristics, and a
//!   probabilistic deletion construction.
//! * `px`-style measure maxima — the largest Lebesgue measure of a union
//!   of open grid cells in `[0, n]^d` avoiding a forbidden pattern
//!   ([`grid`]), with exact containment deciders for finite patterns,
//!   horizontal segments, stacked segments, and disjoint segment unions.
//!
//! [`constructions`] builds the explicit lower-bound objects relating
//! the two worlds (matrix-to-region lifting, strips, L-shapes, grid
//! point sets, dimension lifting), and [`verify`] packages the known
//! inequalities between them as named, parameterized checks.

pub mod config;
pub mod constructions;
pub mod error;
pub mod grid;
pub mod matrix;
pub mod oracle;
pub mod pattern;
pub mod rat;
pub mod record;
pub mod schema;
pub mod search;
pub mod solver;
pub mod verify;

pub use config::Config;

pub use error::{Error, Result};
pub use grid::{EmbeddingWitness, GridRegion};
pub use matrix::BitMatrix;
pub use pattern::{
    AugmentedPattern, FinitePattern, HSegment, Pattern, Segment, SegmentPattern, StackPattern,
    Transform,
};
pub use rat::{EpsRat, Rat};
pub use record::{Bound, Certificate, CheckReport, ExtremalRecord, Relation};
