//! Verdicts on topological normal generation, and generator-count bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::end_type::Predecessor;
use crate::spec::{Diagnostic, InvariantBundle, Multiplicity, Surface, SurfaceSpec};
use crate::witness::{Character, ObstructionWitness, SurfaceModel};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SelfSimilarity {
    Not,
    Uniquely,
    Perfectly,
}

impl fmt::Display for SelfSimilarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelfSimilarity::Not => "NOT",
            SelfSimilarity::Uniquely => "UNIQUELY",
            SelfSimilarity::Perfectly => "PERFECTLY",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// The rule that produced a verdict. Rules are tried in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rule {
    UnabsorbedGenus,
    Rokhlin,
    NotUniquelySelfSimilar,
    Telescoping,
    SingleInvolution,
    ConnectedSum,
    CantorFlux,
    Open,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::UnabsorbedGenus => "R0 unabsorbed finite genus",
            Rule::Rokhlin => "R1 unique self-similarity (Rokhlin)",
            Rule::NotUniquelySelfSimilar => "R2 countable, not uniquely self-similar",
            Rule::Telescoping => "R3 perfect self-similarity (telescoping)",
            Rule::SingleInvolution => "R4 Cantor class plus one puncture (single involution)",
            Rule::ConnectedSum => "R5 Cantor part joined to an end with at most one predecessor",
            Rule::CantorFlux => "R6 two shift types into a Cantor class",
            Rule::Open => "R7 open case",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TngVerdict {
    pub verdict: Verdict,
    pub rule: Rule,
    pub witness: Option<ObstructionWitness>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FluxRank {
    Rank(u64),
    NotApplicable,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Budget {
    pub shifts: u64,
    pub dehn: u64,
    pub handles: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundsReport {
    pub lower: u64,
    pub upper: u64,
    pub flux_rank: FluxRank,
    pub handle_pair_generators: u64,
    pub budget: Budget,
    pub abelianization_upper: Option<u64>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassificationReport {
    pub countable: bool,
    pub self_similarity: SelfSimilarity,
    pub invariants: InvariantBundle,
    pub tng: TngVerdict,
    pub bounds: BoundsReport,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("uncountable spec: flux rank is defined for countable end spaces only")]
    Uncountable,
}

pub fn self_similarity(s: &Surface) -> SelfSimilarity {
    if s.has_unabsorbed_extras() || s.roots().len() != 1 {
        return SelfSimilarity::Not;
    }
    match s.roots()[0].multiplicity {
        Multiplicity::Finite(1) => SelfSimilarity::Uniquely,
        Multiplicity::Cantor => SelfSimilarity::Perfectly,
        Multiplicity::Finite(_) => SelfSimilarity::Not,
    }
}

fn yes(rule: Rule) -> TngVerdict {
    TngVerdict {
        verdict: Verdict::Yes,
        rule,
        witness: None,
        notes: Vec::new(),
    }
}

fn unknown(rule: Rule, note: String) -> TngVerdict {
    TngVerdict {
        verdict: Verdict::Unknown,
        rule,
        witness: None,
        notes: alloc::vec![note],
    }
}

pub fn tng_verdict(s: &Surface) -> TngVerdict {
    if s.has_unabsorbed_genus() {
        return unknown(
            Rule::UnabsorbedGenus,
            String::from(
                "finite genus is not absorbed by any end; self-similarity does not see it",
            ),
        );
    }
    let similarity = self_similarity(s);
    if s.is_countable() {
        if similarity == SelfSimilarity::Uniquely {
            return yes(Rule::Rokhlin);
        }
        let model = SurfaceModel::new(s);
        return match model.find_witness(|_| true) {
            Some(w) => TngVerdict {
                verdict: Verdict::No,
                rule: Rule::NotUniquelySelfSimilar,
                witness: Some(w),
                notes: Vec::new(),
            },
            None => unknown(Rule::Open, countable_search_note(s)),
        };
    }

    if similarity == SelfSimilarity::Perfectly {
        return yes(Rule::Telescoping);
    }
    let roots = s.roots();
    if roots.len() == 1 && roots[0].multiplicity.is_cantor() && s.extra_punctures() == 1 {
        return yes(Rule::SingleInvolution);
    }
    if roots.len() == 2 && !s.has_unabsorbed_extras() {
        let cantor = roots.iter().filter(|r| r.multiplicity.is_cantor()).count();
        let single = roots
            .iter()
            .find(|r| r.multiplicity == Multiplicity::Finite(1));
        if let (1, Some(u)) = (cantor, single) {
            if u.end_type.immediate_predecessors().len() <= 1 {
                return yes(Rule::ConnectedSum);
            }
        }
    }
    let shared = (0..roots.len()).any(|u| {
        !roots[u].multiplicity.is_cantor()
            && (0..roots.len()).any(|p| {
                roots[p].multiplicity.is_cantor()
                    && s.e_cp(u, p).map(|set| set.len() >= 2).unwrap_or(false)
            })
    });
    if shared {
        let model = SurfaceModel::new(s);
        if let Some(w) = model.find_witness(|c| matches!(c, Character::Flux { .. })) {
            return TngVerdict {
                verdict: Verdict::No,
                rule: Rule::CantorFlux,
                witness: Some(w),
                notes: Vec::new(),
            };
        }
    }
    let note = if roots.len() == 1 && roots[0].multiplicity.is_cantor() {
        format!(
            "Cantor class with {} extra punctures is not decided by any rule",
            s.extra_punctures()
        )
    } else {
        String::from("no rule decides this uncountable end space")
    };
    unknown(Rule::Open, note)
}

fn countable_search_note(s: &Surface) -> String {
    match s.roots() {
        [r] if matches!(r.multiplicity, Multiplicity::Finite(n) if n >= 3) => format!(
            "{} ends of one maximal type: the mod-2 flux character is not conjugation-invariant \
             beyond two ends, so no obstruction is certified",
            r.multiplicity
        ),
        _ => String::from(
            "no pair of flux or parity characters certifies an obstruction on the end model",
        ),
    }
}

/// Rank of the flux part of the mapping class group for countable end
/// spaces: the sum over predecessor types `z` of `N_z - 1`.
pub fn fmap_flux_rank(s: &Surface) -> Result<u64, ClassifyError> {
    if !s.is_countable() {
        return Err(ClassifyError::Uncountable);
    }
    let mut counts: alloc::collections::BTreeMap<Predecessor, u64> = Default::default();
    for r in s.roots() {
        let n = match r.multiplicity {
            Multiplicity::Finite(n) => n,
            Multiplicity::Cantor => return Err(ClassifyError::Uncountable),
        };
        for p in r.end_type.immediate_predecessors() {
            if p != Predecessor::Handle {
                *counts.entry(p).or_default() += n;
            }
        }
    }
    Ok(counts.values().map(|n| n - 1).sum())
}

/// `max(1, M(M + C - 1))`.
pub fn upper_bound(m: u64, c: u64) -> u64 {
    (m * (m + c).saturating_sub(1)).max(1)
}

impl Budget {
    pub fn for_counts(m: u64, c: u64) -> Budget {
        Budget {
            shifts: c * m,
            dehn: (m * m).saturating_sub(2 * m),
            handles: m,
        }
    }

    pub fn total(&self) -> u64 {
        self.shifts + self.dehn + self.handles
    }
}

pub fn generator_bounds(s: &Surface) -> BoundsReport {
    let inv = s.invariant_bundle();
    let (m, c) = (inv.m as u64, inv.c as u64);
    let upper = upper_bound(m, c);
    let g: u64 = s
        .roots()
        .iter()
        .filter(|r| r.end_type.direct_genus())
        .map(|r| match r.multiplicity {
            Multiplicity::Finite(n) => n,
            Multiplicity::Cantor => 0,
        })
        .sum();
    let all_cantor = s.roots().iter().all(|r| r.multiplicity.is_cantor());
    BoundsReport {
        lower: (inv.m_iso as u64).saturating_sub(1).max(1),
        upper,
        flux_rank: match fmap_flux_rank(s) {
            Ok(r) => FluxRank::Rank(r),
            Err(_) => FluxRank::NotApplicable,
        },
        handle_pair_generators: g * g.saturating_sub(1) / 2,
        budget: Budget::for_counts(m, c),
        abelianization_upper: (all_cantor && !s.has_unabsorbed_genus()).then_some(upper),
    }
}

pub fn classify(spec: &SurfaceSpec) -> Result<ClassificationReport, Vec<Diagnostic>> {
    let s = Surface::new(spec)?;
    let tng = tng_verdict(&s);
    let bounds = generator_bounds(&s);
    let mut notes: Vec<String> = s.notes().to_vec();
    notes.extend(tng.notes.iter().cloned());
    if tng.verdict == Verdict::No {
        notes.push(String::from(
            "bounds are the general formulas and are informational only: the verdict is NO",
        ));
    }
    Ok(ClassificationReport {
        countable: s.is_countable(),
        self_similarity: self_similarity(&s),
        invariants: s.invariant_bundle(),
        tng,
        bounds,
        notes,
    })
}
