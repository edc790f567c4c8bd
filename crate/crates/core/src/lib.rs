//! Exact invariants for Kirby-diagram computations: Laurent polynomial
//! arithmetic, Fox calculus and Alexander polynomials, integer intersection
//! forms, and Seiberg-Witten polynomial bookkeeping for knot and link surgery.

pub mod alexander;
pub mod claims;
pub mod fourman;
pub mod freegroup;
pub mod laurent;
pub mod linkdiag;
pub mod matrix;
pub mod surgery;

pub use freegroup::{AbelianGroup, GroupPresentation, Word};
pub use laurent::LaurentPoly;
pub use matrix::IntMatrix;
