//! Permutation models of mapping classes acting on ends.
//!
//! [`EndPerm`] models a map on the ends `{z_i : i ∈ ℤ}` of a bi-infinite
//! strip, [`MultiEndPerm`] a map on `n` rays of ends converging to `n`
//! maximal ends, and [`ShiftSpec`] a shift whose image skips a set of
//! indices.

mod end_perm;
mod multi;
mod shift;

pub use end_perm::{phi, swindle_check, theta_z, CutPosition, EndPerm};
pub use multi::{theta_tilde, theta_tilde_with_word, MultiEndPerm, RayMap};
pub use shift::{
    classify_shift, normalizer, verify_normalization, Block, Correction, Excluded, ShiftKind,
    ShiftSpec, Tail,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FluxError {
    #[error("not a bijection: {0}")]
    NotBijective(&'static str),
    #[error("table key {key} outside radius {radius}")]
    KeyOutsideRadius { key: i64, radius: i64 },
    #[error("swindle needs d = 0, got d = {0}")]
    NonzeroTranslation(i64),
    #[error("support of f exceeds [-{k}, {k}]")]
    SupportTooLarge { k: i64 },
    #[error("k must be positive")]
    NonPositiveK,
    #[error("expected {expected} strip maps, got {got}")]
    StripCount { expected: usize, got: usize },
    #[error("shift is already full; nothing to correct")]
    AlreadyFull,
    #[error("invalid shift description: {0}")]
    InvalidShift(&'static str),
    #[error("ray {0} out of range")]
    RayOutOfRange(usize),
    #[error("designated twists do not generate the full symmetric group")]
    TwistsDoNotGenerate,
    #[error("twist word does not realize the inverse ray permutation")]
    WrongWord,
    #[error("too many rays for word search (n = {0}, limit 6)")]
    TooManyRays(usize),
}
