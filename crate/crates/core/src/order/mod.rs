//! Finite posets, lattices, ⟨∨,0⟩-semilattices and Galois adjoints.

pub mod galois;
pub mod ideals;
pub mod interpolation;
pub mod lattice;
pub mod poset;
pub mod semilattice;

pub use galois::{
    adjoint_of_join_hom, adjoint_of_meet_hom, adjunction_violation, CompleteJoinHom,
    CompleteMeetHom,
};
pub use ideals::{compact_elements, ideal_lattice};
pub use interpolation::{interpolation_check, interval_axiom_check};
pub use lattice::{FiniteLattice, FiniteOrder};
pub use poset::FinitePoset;
pub use semilattice::FiniteSemilattice;
