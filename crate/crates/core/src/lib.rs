//! Finite lattice theory workbench: partial lattices and their congruences,
//! measures, Galois duals, the free lattice word problem, pushout
//! amalgamation, and verifiers for the interval-algebra counterexamples.

pub mod amalgam;
pub mod bits;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod free;
pub mod omega;
pub mod order;
pub mod partial;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
