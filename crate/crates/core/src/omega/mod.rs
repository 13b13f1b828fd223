//! The interval-algebra spaces over ω, the maps σ and μ, the interpolation
//! obstructions and the truncated cube.

pub mod chain;
pub mod cube;
pub mod interval;
pub mod obstruction;
pub mod triple;

pub use chain::{
    dyadic_scan, dyadic_witness, sample_measure_axioms, DyadicMax, OmegaChainPair, OmegaViolation, SampleReport,
    Sequence, Tail, ValueSemilattice,
};
pub use cube::{cube_diagram_self_check, cube_verify, CubeReport};
pub use interval::{chi, IntervalSet};
pub use obstruction::{
    obstruction_extract_1d, obstruction_extract_2d, window_extract, window_lift, BooleanWindow, ConTarget,
    Extracted, LiftTarget, ObstructionReport,
};
pub use triple::{p_join, p_meet, random_triple, Membership, Space, Triple};
