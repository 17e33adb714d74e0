//! End types as finite accumulation trees.
//!
//! A node describes the germ of an end `x`: which end types accumulate onto
//! `x` cofinally (the children), whether handles accumulate onto `x` directly,
//! and whether the class of `x` is a Cantor set (the node accumulates onto
//! itself). The preorder on ends becomes a relation on trees once trees are
//! brought into canonical form, and equivalence of ends becomes equality of
//! canonical trees.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// One end type.
///
/// Children are kept sorted and deduplicated, so two trees built from the
/// same child set compare equal regardless of construction order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EndType {
    direct_genus: bool,
    self_accumulating: bool,
    children: Vec<EndType>,
}

/// A member of `Im(x)`: either an end type or the handle marker.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Predecessor {
    Handle,
    End(EndType),
}

impl fmt::Display for Predecessor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predecessor::Handle => f.write_str("handle"),
            Predecessor::End(t) => t.fmt(f),
        }
    }
}

impl EndType {
    /// Builds a node. Children are sorted and deduplicated structurally; no
    /// other normalization happens until [`EndType::canonicalize`].
    pub fn new(direct_genus: bool, self_accumulating: bool, children: Vec<EndType>) -> Self {
        let mut children = children;
        children.sort();
        children.dedup();
        EndType {
            direct_genus,
            self_accumulating,
            children,
        }
    }

    /// An isolated planar end.
    pub fn puncture() -> Self {
        EndType::new(false, false, Vec::new())
    }

    /// `acc([..])`: an end accumulated by the given types.
    pub fn acc(children: Vec<EndType>) -> Self {
        EndType::new(false, false, children)
    }

    /// `acc(genus, [..])`.
    pub fn acc_genus(children: Vec<EndType>) -> Self {
        EndType::new(true, false, children)
    }

    /// `cantor([..])`, optionally with genus.
    pub fn cantor(genus: bool, children: Vec<EndType>) -> Self {
        EndType::new(genus, true, children)
    }

    /// Depth-`k` planar tower over punctures: the maximal end of `ω^k + 1`.
    pub fn planar_tower(k: u32) -> Self {
        let mut t = EndType::puncture();
        for _ in 0..k {
            t = EndType::acc(alloc::vec![t]);
        }
        t
    }

    pub fn direct_genus(&self) -> bool {
        self.direct_genus
    }

    pub fn self_accumulating(&self) -> bool {
        self.self_accumulating
    }

    pub fn children(&self) -> &[EndType] {
        &self.children
    }

    pub fn is_puncture(&self) -> bool {
        !self.direct_genus && !self.self_accumulating && self.children.is_empty()
    }

    /// Number of node levels; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(EndType::depth).max().unwrap_or(0)
    }

    /// Largest child count over all nodes.
    pub fn max_branching(&self) -> usize {
        self.children
            .iter()
            .map(EndType::max_branching)
            .max()
            .unwrap_or(0)
            .max(self.children.len())
    }

    /// True when any node of the tree carries the Cantor flag.
    pub fn has_cantor(&self) -> bool {
        self.self_accumulating || self.children.iter().any(EndType::has_cantor)
    }

    pub fn with_self_accumulating(&self, flag: bool) -> EndType {
        EndType {
            self_accumulating: flag,
            ..self.clone()
        }
    }

    /// Normal form, built bottom-up:
    ///
    /// 1. children are canonicalized and deduplicated;
    /// 2. a child lying below another child is dropped;
    /// 3. `direct_genus` is cleared when a child is accumulated by genus;
    /// 4. a node whose only child `c` is Cantor-flagged, with no direct genus
    ///    left, is equivalent to `c` and collapses to it.
    ///
    /// Subtrees of a canonical tree are canonical.
    pub fn canonicalize(&self) -> EndType {
        let mut kids: Vec<EndType> = self.children.iter().map(EndType::canonicalize).collect();
        kids.sort();
        kids.dedup();

        let belows: Vec<BTreeSet<EndType>> = kids.iter().map(EndType::below_canonical).collect();
        let mut kept = Vec::with_capacity(kids.len());
        for (i, c) in kids.iter().enumerate() {
            let absorbed = belows
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && b.contains(c));
            if !absorbed {
                kept.push(c.clone());
            }
        }

        let genus = self.direct_genus && !kept.iter().any(EndType::in_eg);
        if !genus && kept.len() == 1 && kept[0].self_accumulating {
            return kept.pop().unwrap();
        }
        EndType {
            direct_genus: genus,
            self_accumulating: self.self_accumulating,
            children: kept,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    /// Types occurring in every neighborhood of `self` other than `self`'s
    /// own point: all descendants, plus `self` when its class is a Cantor
    /// set. Input is canonicalized first.
    pub fn below(&self) -> BTreeSet<EndType> {
        self.canonicalize().below_canonical()
    }

    fn below_canonical(&self) -> BTreeSet<EndType> {
        let mut out = BTreeSet::new();
        if self.self_accumulating {
            out.insert(self.clone());
        }
        let mut stack: Vec<&EndType> = self.children.iter().collect();
        while let Some(t) = stack.pop() {
            if out.insert(t.clone()) {
                stack.extend(t.children.iter());
            }
        }
        out
    }

    /// Accumulated by genus, directly or through some type below.
    pub fn in_eg(&self) -> bool {
        self.direct_genus || self.children.iter().any(EndType::in_eg)
    }

    /// `Im(x)`: the ≼-maximal types strictly below `x` and outside `E(x)`,
    /// plus the handle marker when `x` is accumulated by genus directly.
    pub fn immediate_predecessors(&self) -> BTreeSet<Predecessor> {
        let x = self.canonicalize();
        let below = x.below_canonical();
        let candidates: Vec<&EndType> = below.iter().filter(|t| **t != x).collect();
        let belows: Vec<BTreeSet<EndType>> =
            candidates.iter().map(|t| t.below_canonical()).collect();
        let mut out = BTreeSet::new();
        for (i, t) in candidates.iter().enumerate() {
            let dominated = belows
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && *candidates[j] != **t && b.contains(*t));
            if !dominated {
                out.insert(Predecessor::End((*t).clone()));
            }
        }
        if x.direct_genus {
            out.insert(Predecessor::Handle);
        }
        out
    }
}

/// `y ≼ x`: every neighborhood of `x` contains a copy of a neighborhood of `y`.
pub fn preceq(y: &EndType, x: &EndType) -> bool {
    let y = y.canonicalize();
    let x = x.canonicalize();
    y == x || x.below_canonical().contains(&y)
}

/// `x ∼ y`.
pub fn equivalent(x: &EndType, y: &EndType) -> bool {
    x.canonicalize() == y.canonicalize()
}

impl fmt::Display for EndType {
    /// Surface-language syntax; parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_puncture() {
            return f.write_str("puncture");
        }
        f.write_str(if self.self_accumulating {
            "cantor("
        } else {
            "acc("
        })?;
        if self.direct_genus {
            f.write_str("genus")?;
            if !self.children.is_empty() {
                f.write_str(", ")?;
            }
        }
        if !self.children.is_empty() {
            f.write_str("[")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                c.fmt(f)?;
            }
            f.write_str("]")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn flute_end() -> EndType {
        EndType::acc(vec![EndType::puncture()])
    }

    fn loch_ness_end() -> EndType {
        EndType::acc_genus(vec![])
    }

    fn cantor_leaf() -> EndType {
        EndType::cantor(false, vec![])
    }

    #[test]
    fn absorption_drops_dominated_child() {
        let t = EndType::acc(vec![EndType::puncture(), flute_end()]);
        assert_eq!(t.canonicalize(), EndType::acc(vec![flute_end()]));
        assert_eq!(EndType::puncture().canonicalize(), EndType::puncture());
    }

    #[test]
    fn genus_absorption() {
        let t = EndType::acc_genus(vec![loch_ness_end()]);
        let c = t.canonicalize();
        assert_eq!(c, EndType::acc(vec![loch_ness_end()]));
        assert!(!c.direct_genus());
        assert!(equivalent(&t, &EndType::acc(vec![loch_ness_end()])));
    }

    #[test]
    fn single_cantor_child_collapses() {
        let t = EndType::acc(vec![cantor_leaf()]);
        assert_eq!(t.canonicalize(), cantor_leaf());
        let t = EndType::cantor(false, vec![cantor_leaf()]);
        assert_eq!(t.canonicalize(), cantor_leaf());
        // genus makes the point different from the Cantor points around it
        let t = EndType::acc_genus(vec![cantor_leaf()]);
        assert_eq!(t.canonicalize(), t);
    }

    #[test]
    fn below_examples() {
        assert!(EndType::puncture().below().is_empty());
        let b = flute_end().below();
        assert_eq!(b.len(), 1);
        assert!(b.contains(&EndType::puncture()));
        let b = cantor_leaf().below();
        assert_eq!(b.into_iter().collect::<Vec<_>>(), vec![cantor_leaf()]);
    }

    #[test]
    fn preceq_examples() {
        let x = flute_end();
        assert!(preceq(&x, &x));
        assert!(preceq(&EndType::puncture(), &x));
        assert!(!preceq(&x, &EndType::puncture()));
        assert!(!preceq(&cantor_leaf(), &EndType::puncture()));
        assert!(equivalent(&x, &x));
        assert!(!equivalent(&x, &EndType::puncture()));
    }

    #[test]
    fn eg_membership() {
        assert!(!EndType::puncture().in_eg());
        assert!(loch_ness_end().in_eg());
        assert!(EndType::acc(vec![loch_ness_end()]).in_eg());
    }

    #[test]
    fn immediate_predecessor_examples() {
        let im = flute_end().immediate_predecessors();
        assert_eq!(im.len(), 1);
        assert!(im.contains(&Predecessor::End(EndType::puncture())));

        let im = loch_ness_end().immediate_predecessors();
        assert_eq!(
            im.into_iter().collect::<Vec<_>>(),
            vec![Predecessor::Handle]
        );

        let w2 = EndType::planar_tower(2);
        let im = w2.immediate_predecessors();
        assert_eq!(
            im.into_iter().collect::<Vec<_>>(),
            vec![Predecessor::End(flute_end())]
        );

        // a Cantor class is excluded from its own predecessors
        let t = EndType::cantor(false, vec![EndType::puncture()]);
        let im = t.immediate_predecessors();
        assert_eq!(
            im.into_iter().collect::<Vec<_>>(),
            vec![Predecessor::End(EndType::puncture())]
        );
    }

    #[test]
    fn display_round_trip_shapes() {
        assert_eq!(EndType::puncture().to_string(), "puncture");
        assert_eq!(loch_ness_end().to_string(), "acc(genus)");
        assert_eq!(cantor_leaf().to_string(), "cantor()");
        assert_eq!(
            EndType::acc_genus(vec![EndType::puncture()]).to_string(),
            "acc(genus, [puncture])"
        );
        assert_eq!(
            EndType::planar_tower(2).to_string(),
            "acc([acc([puncture])])"
        );
    }
}
