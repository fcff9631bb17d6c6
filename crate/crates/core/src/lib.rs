//! Exact-arithmetic toolkit for art-gallery localization instances.
//!
//! The crate compiles 3CNF formulas into gadget polygons with exact rational
//! coordinates, produces tower certificates for satisfying assignments, and
//! verifies both the structural invariants of the construction and the
//! localization semantics by exact sampling.

pub mod formula;
pub mod geometry;
pub mod io;
pub mod reduction;
pub mod trilateration;
pub mod verifier;
pub mod visibility;

pub use formula::{Assignment, CnfFormula, Lit};
pub use geometry::{Point, Rat, SimplePolygon};
pub use reduction::{Certificate, KSequence, ReductionOutput};
