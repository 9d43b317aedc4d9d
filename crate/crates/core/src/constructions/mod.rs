//! Explicit generator constructions, each returned as a replayable trace.

mod erratum;
mod genofgc;
mod lemma;
mod pcycle;
mod prop6;
mod translation;

pub use erratum::{ascending_cycle, build_erratum_omega, omega_prime, OmegaParams};
pub use genofgc::{build_genofgc, genofgc_generators, relabel_for_max};
pub use lemma::{build_exceptional_h2, build_lemma37, lemma_element, three_cycle_conjugator, three_subsets};
pub use pcycle::{build_pcycle, PcycleOptions};
pub use prop6::{build_prop6, prop6_omega, random_targets, Prop6, SWEEP_SAMPLES};
pub use translation::{
    choose_translation_elements, sweep_elements, sweep_into_ray1, Sweep, SweepElements, TranslationData,
};
