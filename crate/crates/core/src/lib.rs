//! Classification of infinite-type surfaces by their end spaces, and the
//! flux machinery used to decide when the mapping class group can be
//! topologically normally generated.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the surface
//! language and the command-line tool live in the `endcalc` crate.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod end_type;
pub mod flux;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod spec;
pub mod witness;

pub use classify::{
    classify, fmap_flux_rank, generator_bounds, self_similarity, tng_verdict, upper_bound,
    BoundsReport, Budget, ClassificationReport, FluxRank, Rule, SelfSimilarity, TngVerdict,
    Verdict,
};
pub use end_type::{equivalent, preceq, EndType, Predecessor};
pub use spec::{
    Diagnostic, InvariantBundle, Multiplicity, Root, Subordinate, Surface, SurfaceSpec,
};
pub use witness::{Character, ObstructionWitness, WitnessTarget};
