//! Whole surfaces: maximal end classes plus finitely many extra ends.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::end_type::{EndType, Predecessor};

/// Size of a maximal class: finitely many ends, or a Cantor set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Multiplicity {
    Finite(u64),
    Cantor,
}

impl Multiplicity {
    fn merge(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Cantor,
        }
    }

    pub fn is_cantor(self) -> bool {
        self == Multiplicity::Cantor
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Cantor => f.write_str("cantor"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Root {
    pub end_type: EndType,
    pub multiplicity: Multiplicity,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subordinate {
    pub end_type: EndType,
    pub count: u64,
}

/// A surface as written by the user, before validation.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SurfaceSpec {
    pub roots: Vec<Root>,
    pub subordinates: Vec<Subordinate>,
    pub extra_punctures: u64,
    pub extra_genus: u64,
}

/// A reason a [`SurfaceSpec`] was rejected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Diagnostic {
    ZeroMultiplicity(EndType),
    ZeroSubordinateCount(EndType),
    SubordinateNotBelowRoot(EndType),
    SubordinateIsMaximal(EndType),
    FiniteType,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ZeroMultiplicity(t) => write!(f, "root multiplicity must be positive: {t}"),
            Diagnostic::ZeroSubordinateCount(t) => {
                write!(f, "subordinate count must be positive: {t}")
            }
            Diagnostic::SubordinateNotBelowRoot(t) => {
                write!(f, "subordinate not below any root: {t}")
            }
            Diagnostic::SubordinateIsMaximal(t) => {
                write!(
                    f,
                    "subordinate is equivalent to a root, so it is maximal: {t}"
                )
            }
            Diagnostic::FiniteType => {
                f.write_str("finite-type surface: no infinite accumulation of ends or genus")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum PairError {
    #[error("root index {0} out of range")]
    OutOfRange(usize),
    #[error("root {0} is a single end; it has no partner of its own type")]
    SingleEnd(usize),
}

/// Invariants read off the maximal classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantBundle {
    pub m: usize,
    pub c: usize,
    pub m_iso: usize,
    pub g0: Vec<EndType>,
    pub maximal_classes: Vec<Root>,
}

/// A validated surface in normal form.
///
/// Roots are canonical, pairwise inequivalent, pairwise incomparable and
/// sorted. Subordinate ends have been absorbed into the infinite supply
/// below the roots, and extra punctures are kept only when no root is
/// accumulated by punctures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Surface {
    roots: Vec<Root>,
    extra_punctures: u64,
    extra_genus: u64,
    notes: Vec<String>,
}

pub fn validate(spec: &SurfaceSpec) -> Result<(), Vec<Diagnostic>> {
    Surface::new(spec).map(|_| ())
}

impl Surface {
    pub fn new(spec: &SurfaceSpec) -> Result<Surface, Vec<Diagnostic>> {
        let mut diagnostics = Vec::new();
        let mut notes = Vec::new();
        let mut extra_punctures = spec.extra_punctures;

        let mut merged: Vec<Root> = Vec::new();
        for root in &spec.roots {
            if root.multiplicity == Multiplicity::Finite(0) {
                diagnostics.push(Diagnostic::ZeroMultiplicity(root.end_type.clone()));
                continue;
            }
            let mut t = root.end_type.canonicalize();
            let mut multiplicity = root.multiplicity;
            if multiplicity.is_cantor() && !t.self_accumulating() {
                t = t.with_self_accumulating(true).canonicalize();
            }
            if t.self_accumulating() && !multiplicity.is_cantor() {
                notes.push(format!(
                    "root {t} has a Cantor class; multiplicity set to cantor"
                ));
                multiplicity = Multiplicity::Cantor;
            }
            if t.is_puncture() {
                if let Multiplicity::Finite(n) = multiplicity {
                    extra_punctures += n;
                }
                continue;
            }
            match merged.iter_mut().find(|r| r.end_type == t) {
                Some(r) => r.multiplicity = r.multiplicity.merge(multiplicity),
                None => merged.push(Root {
                    end_type: t,
                    multiplicity,
                }),
            }
        }

        let belows: Vec<BTreeSet<EndType>> = merged.iter().map(|r| r.end_type.below()).collect();
        let mut roots = Vec::new();
        for (i, r) in merged.iter().enumerate() {
            let dominated = belows
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && b.contains(&r.end_type));
            if dominated {
                notes.push(format!(
                    "root {} lies below another root and is absorbed",
                    r.end_type
                ));
            } else {
                roots.push(r.clone());
            }
        }
        roots.sort();

        for sub in &spec.subordinates {
            let t = sub.end_type.canonicalize();
            if sub.count == 0 {
                diagnostics.push(Diagnostic::ZeroSubordinateCount(t));
            } else if roots.iter().any(|r| r.end_type == t) {
                diagnostics.push(Diagnostic::SubordinateIsMaximal(t));
            } else if !roots.iter().any(|r| r.end_type.below().contains(&t)) {
                diagnostics.push(Diagnostic::SubordinateNotBelowRoot(t));
            }
        }

        if roots.is_empty() && diagnostics.is_empty() {
            diagnostics.push(Diagnostic::FiniteType);
        }
        if !diagnostics.is_empty() {
            return Err(diagnostics);
        }

        let puncture = EndType::puncture();
        if extra_punctures > 0 && roots.iter().any(|r| r.end_type.below().contains(&puncture)) {
            notes.push(String::from(
                "extra punctures are absorbed by ends accumulated by punctures",
            ));
            extra_punctures = 0;
        }
        notes.push(String::from(
            "finite accumulation trees have finite rank and are never of limit type",
        ));
        notes.push(String::from(
            "the end space is tame, so the mapping class group is CB-generated",
        ));

        Ok(Surface {
            roots,
            extra_punctures,
            extra_genus: spec.extra_genus,
            notes,
        })
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn maximal_types(&self) -> &[Root] {
        &self.roots
    }

    pub fn extra_punctures(&self) -> u64 {
        self.extra_punctures
    }

    pub fn extra_genus(&self) -> u64 {
        self.extra_genus
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// No end class is a Cantor set.
    pub fn is_countable(&self) -> bool {
        !self.roots.iter().any(|r| r.end_type.has_cantor())
    }

    /// Finite genus that no genus-accumulated end can swallow.
    pub fn has_unabsorbed_genus(&self) -> bool {
        self.extra_genus > 0 && !self.roots.iter().any(|r| r.end_type.in_eg())
    }

    pub fn has_unabsorbed_extras(&self) -> bool {
        self.extra_punctures > 0 || self.has_unabsorbed_genus()
    }

    /// Whether `(a, b)` names two distinct maximal ends.
    pub fn is_admissible_pair(&self, a: usize, b: usize) -> Result<(), PairError> {
        for i in [a, b] {
            if i >= self.roots.len() {
                return Err(PairError::OutOfRange(i));
            }
        }
        if a == b && self.roots[a].multiplicity == Multiplicity::Finite(1) {
            return Err(PairError::SingleEnd(a));
        }
        Ok(())
    }

    /// Countable common immediate predecessors of a maximal end of root `a`
    /// and a different maximal end of root `b`.
    pub fn e_cp(&self, a: usize, b: usize) -> Result<BTreeSet<EndType>, PairError> {
        self.is_admissible_pair(a, b)?;
        let ends = |i: usize| -> BTreeSet<EndType> {
            self.roots[i]
                .end_type
                .immediate_predecessors()
                .into_iter()
                .filter_map(|p| match p {
                    Predecessor::End(t) if !t.self_accumulating() => Some(t),
                    _ => None,
                })
                .collect()
        };
        let (pa, pb) = (ends(a), ends(b));
        Ok(pa.intersection(&pb).cloned().collect())
    }

    pub fn invariant_bundle(&self) -> InvariantBundle {
        let n = self.roots.len();
        let mut c = 0;
        for a in 0..n {
            for b in a..n {
                if let Ok(set) = self.e_cp(a, b) {
                    c = c.max(set.len());
                }
            }
        }
        InvariantBundle {
            m: n,
            c,
            m_iso: self
                .roots
                .iter()
                .filter(|r| !r.multiplicity.is_cantor() && !r.end_type.is_puncture())
                .count(),
            g0: self
                .roots
                .iter()
                .filter(|r| r.end_type.direct_genus())
                .map(|r| r.end_type.clone())
                .collect(),
            maximal_classes: self.roots.clone(),
        }
    }
}
