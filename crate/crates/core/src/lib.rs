//! Escher degree of chair tilings.
//!
//! The chair (L-tromino) tiles a copy of itself scaled by two. Labelling the
//! four copies with one or two prototiles gives a hierarchical tiling; this
//! crate computes how many independent ways the prototile edges can be
//! perturbed while the hierarchy still tiles, classifies every two-prototile
//! labelling, and renders escherized spreads.
//!
//! - [`edge`]: oriented edge words and perturbed curves.
//! - [`geometry`]: exact chair geometry, spreads, matchings and decompositions.
//! - [`solver`]: parity union-find and the closure procedures.
//! - [`classify`]: enumeration of all two-rule cases.
//! - [`escher`]: curve propagation, rendering and consistency checks.

pub mod classify;
pub mod edge;
pub mod error;
pub mod escher;
pub mod geometry;
pub mod solver;

pub use edge::{split_equal, split_match, EdgeSymbol, EdgeTerm, PerturbedCurve, Prototile, Word};
pub use error::{Error, Result};
pub use geometry::{Placement, Rotation, Spread, SubstitutionRule};
pub use solver::{solve, RelationSystem, Solution, SolveMode};
