//! Integer calculus of KAM-context characteristics, finite-cutoff Diophantine
//! checks, and a numerical laboratory for a reversible toy system whose
//! equilibrium, cycles and 2-tori realise the chain of contexts
//! `(0,1,2,s) → (1,1,1,s) → (2,1,0,s)`.

pub mod cli;
pub mod context;
pub mod diophantine;
pub mod output;
pub mod toy;

pub use context::{
    context2_excitation_diagnostics, destroy_resonant, excite_modes, profile, Context2Report,
    ContextError, ContextProfile, FamilySmoothness, KamContext, ReversibleClass, SpectrumShape,
    TransitionResult,
};
pub use diophantine::{
    check_affine_diophantine, check_diophantine, measure_estimate, min_quality, CheckResult,
    DiophantineError, DiophantineParams, FrequencyBox, FrequencyVector,
};
