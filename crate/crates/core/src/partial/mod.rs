//! Partial lattices, congruences, quotients, homomorphisms and measures.

pub mod congruence;
pub mod conlat;
pub mod corpus;
pub mod hom;
pub mod ideal;
pub mod lattice;
pub mod measure;

pub use congruence::{
    congruence_closure, congruence_join, is_congruence, quotient, theta, theta_plus,
    ClosureEngine, Congruence, Quotient,
};
pub use conlat::{con_lattice, ConBound, ConLattice};
pub use hom::{cep_check, cofinality_surjection_check, enumerate_homs, hom_violation, PartialLatticeHom};
pub use ideal::{filter_generated, ideal_generated};
pub use lattice::{validate, FinitePartialLattice, ValidationReport};
pub use measure::{hom_from_measure, measure_from_hom, Measure, MeasureViolation};
