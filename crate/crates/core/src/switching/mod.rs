//! Chord switchings on a Hamilton cycle and the staged exposure procedures
//! built on them.

mod chords;
mod staged;

pub use chords::{
    aux_graph, canonical_chord, count_e_ell, count_e_ell_closed_form, dir_shortcut_cycle, e_ell, f_set, in_e_ell,
    intersecting_edges, switch_cycles, ChordIndex, SwitchingContext,
};
pub use staged::{
    binomial_parameters, regular_parameters, staged_exposure_binomial, staged_exposure_regular,
    staged_exposure_regular_with, StageParams, StagedOutcome, StagedVariant,
};
