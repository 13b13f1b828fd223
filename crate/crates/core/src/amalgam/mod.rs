//! Pushouts of partial lattices, congruence pairs and measured amalgamation.

pub mod extend;
pub mod measured;
pub mod pairs;
pub mod pushout;
pub mod saturation;
pub mod square;

pub use extend::{extend_hom_cofinal, join_zero_violation, meet_formula, monogenic_extension, Monogenic};
pub use measured::MeasuredPartialLattice;
pub use pairs::{mediating_gamma, verify_claims, ClaimsReport, CongruencePairLattice, Gamma};
pub use pushout::{pushout, universal_property_check, universal_property_count_check, Pushout, UniversalReport};
pub use saturation::{
    chain_gadget, chain_refinement_step, perspectivity_check, rc_gadget, relative_complement_step,
    saturation_step, Gadget, SaturationStep,
};
pub use square::{compatibility_violation, reduce_to_embeddings, Reduced, TruncatedSquare};
