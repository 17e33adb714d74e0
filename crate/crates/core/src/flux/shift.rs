use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use super::FluxError;

/// Which tails of ℤ carry a periodic excluded set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tail {
    /// `{i ≥ N : i mod p ∈ r}`
    Upper,
    /// `{i ≤ -N : i mod p ∈ r}`
    Lower,
    Both,
}

/// The indices skipped by a shift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Excluded {
    Finite(BTreeSet<i64>),
    Periodic {
        threshold: i64,
        period: i64,
        residues: BTreeSet<i64>,
        tail: Tail,
    },
}

/// A shift `η` sending `z_{a_i}` to `z_{a_{i+1}}`, where `{a_i}` enumerates
/// the complement of the excluded set, and fixing every excluded index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftSpec {
    excluded: Excluded,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftKind {
    Full,
    Permissible,
    Spontaneous,
}

/// A maximal run `[start, end]` of excluded indices. Its correction is the
/// cycle `start → start + 1 → ⋯ → end + 1 → start`, i.e. the product of
/// half twists `T_start ∘ ⋯ ∘ T_end`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Block {
    pub start: i64,
    pub end: i64,
}

/// A correction `T` making `T ∘ η` the full shift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Correction {
    /// Finitely many disjoint blocks, listed explicitly.
    Blocks(Vec<Block>),
    /// One block per excluded run of a periodic set, found on demand.
    Periodic(ShiftSpec),
}

impl ShiftSpec {
    pub fn finite(excluded: impl IntoIterator<Item = i64>) -> Self {
        ShiftSpec {
            excluded: Excluded::Finite(excluded.into_iter().collect()),
        }
    }

    pub fn periodic(
        threshold: i64,
        period: i64,
        residues: impl IntoIterator<Item = i64>,
        tail: Tail,
    ) -> Result<Self, FluxError> {
        if period < 2 {
            return Err(FluxError::InvalidShift("period must be at least 2"));
        }
        let residues: BTreeSet<i64> = residues.into_iter().collect();
        if residues.iter().any(|r| !(0..period).contains(r)) {
            return Err(FluxError::InvalidShift("residue outside [0, p)"));
        }
        if residues.is_empty() || residues.len() as i64 == period {
            return Err(FluxError::InvalidShift(
                "residues must be a proper nonempty subset",
            ));
        }
        Ok(ShiftSpec {
            excluded: Excluded::Periodic {
                threshold,
                period,
                residues,
                tail,
            },
        })
    }

    pub fn excluded(&self) -> &Excluded {
        &self.excluded
    }

    pub fn is_excluded(&self, i: i64) -> bool {
        match &self.excluded {
            Excluded::Finite(set) => set.contains(&i),
            Excluded::Periodic {
                threshold,
                period,
                residues,
                tail,
            } => {
                let hit = residues.contains(&i.rem_euclid(*period));
                let upper = matches!(tail, Tail::Upper | Tail::Both) && i >= *threshold;
                let lower = matches!(tail, Tail::Lower | Tail::Both) && i <= -*threshold;
                hit && (upper || lower)
            }
        }
    }

    /// The model map: excluded indices are fixed, every other index moves
    /// to the next non-excluded one.
    pub fn apply(&self, i: i64) -> i64 {
        if self.is_excluded(i) {
            return i;
        }
        let mut j = i + 1;
        while self.is_excluded(j) {
            j += 1;
        }
        j
    }

    /// Maximal excluded run containing `i`, if `i` is excluded.
    fn run_containing(&self, i: i64) -> Option<Block> {
        if !self.is_excluded(i) {
            return None;
        }
        let (mut start, mut end) = (i, i);
        while self.is_excluded(start - 1) {
            start -= 1;
        }
        while self.is_excluded(end + 1) {
            end += 1;
        }
        Some(Block { start, end })
    }
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.excluded {
            Excluded::Finite(set) => {
                f.write_str("shift excluded=finite{")?;
                for (n, i) in set.iter().enumerate() {
                    if n > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}")?;
                }
                f.write_str("}")
            }
            Excluded::Periodic {
                threshold,
                period,
                residues,
                tail,
            } => {
                write!(f, "shift excluded=periodic{{N={threshold},p={period},r=")?;
                for (n, r) in residues.iter().enumerate() {
                    if n > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{r}")?;
                }
                match tail {
                    Tail::Upper => f.write_str("}"),
                    Tail::Lower => f.write_str(",tail=lower}"),
                    Tail::Both => f.write_str(",tail=both}"),
                }
            }
        }
    }
}

pub fn classify_shift(s: &ShiftSpec) -> ShiftKind {
    match &s.excluded {
        Excluded::Finite(set) if set.is_empty() => ShiftKind::Full,
        Excluded::Finite(_) => ShiftKind::Permissible,
        Excluded::Periodic { .. } => ShiftKind::Spontaneous,
    }
}

pub fn normalizer(s: &ShiftSpec) -> Result<Correction, FluxError> {
    match &s.excluded {
        Excluded::Finite(set) if set.is_empty() => Err(FluxError::AlreadyFull),
        Excluded::Finite(set) => {
            let mut blocks: Vec<Block> = Vec::new();
            for &i in set {
                match blocks.last_mut() {
                    Some(b) if b.end + 1 == i => b.end = i,
                    _ => blocks.push(Block { start: i, end: i }),
                }
            }
            Ok(Correction::Blocks(blocks))
        }
        Excluded::Periodic { .. } => Ok(Correction::Periodic(s.clone())),
    }
}

impl Correction {
    pub fn apply(&self, x: i64) -> i64 {
        match self {
            Correction::Blocks(blocks) => blocks
                .iter()
                .find(|b| (b.start..=b.end + 1).contains(&x))
                .map_or(x, |b| cycle(*b, x)),
            Correction::Periodic(s) => {
                if let Some(b) = s.run_containing(x) {
                    cycle(b, x)
                } else if let Some(b) = s.run_containing(x - 1) {
                    cycle(b, x)
                } else {
                    x
                }
            }
        }
    }

    /// Half-twist indices `b_1 < ⋯ < b_k` of a finite correction.
    pub fn half_twists(&self) -> Option<Vec<i64>> {
        match self {
            Correction::Blocks(blocks) => {
                Some(blocks.iter().flat_map(|b| b.start..=b.end).collect())
            }
            Correction::Periodic(_) => None,
        }
    }
}

fn cycle(b: Block, x: i64) -> i64 {
    if x == b.end + 1 {
        b.start
    } else {
        x + 1
    }
}

/// Whether `T(η(i)) = i + 1` for all `|i| ≤ window`.
pub fn verify_normalization(s: &ShiftSpec, t: &Correction, window: i64) -> bool {
    (-window..=window).all(|i| t.apply(s.apply(i)) == i + 1)
}
