//! Brute-force oracle for the end-type preorder.
//!
//! Works on raw (non-canonical) trees and never calls into the canonical-form
//! machinery. Two nodes have homeomorphic germs when they agree on genus
//! accumulation and the sets of germs accumulating onto them match in both
//! directions. That relation is computed as the coarsest stable partition of
//! a node arena (a greatest fixpoint, refined from the one-block partition).
//! Then `y ≼ x` iff the germ of `y` occurs at `x` or among the points
//! accumulating onto `x`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::end_type::EndType;

/// Largest input accepted by [`oracle_preceq`].
pub const ORACLE_MAX_DEPTH: usize = 4;
pub const ORACLE_MAX_BRANCHING: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("tree exceeds oracle scale (depth {depth}, branching {branching}; limits 4 and 4)")]
    TooLarge { depth: usize, branching: usize },
}

/// A node of the oracle arena. Children refer to earlier arena entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNode {
    pub genus: bool,
    pub cantor: bool,
    pub children: Vec<usize>,
}

/// Germ classes over a closed arena of raw nodes.
pub struct GermOracle {
    nodes: Vec<RawNode>,
    /// Strict descendants plus the node itself when Cantor-flagged.
    accumulating: Vec<Vec<usize>>,
    class: Vec<u32>,
    class_count: usize,
}

impl GermOracle {
    /// `nodes` must be topologically ordered: children before parents.
    pub fn from_nodes(nodes: Vec<RawNode>) -> Self {
        let n = nodes.len();
        let mut eg = alloc::vec![false; n];
        let mut desc: Vec<Vec<usize>> = Vec::with_capacity(n);
        for (i, node) in nodes.iter().enumerate() {
            let mut set = BTreeSet::new();
            let mut g = node.genus;
            for &c in &node.children {
                assert!(c < i, "arena must list children first");
                g |= eg[c];
                set.insert(c);
                set.extend(desc[c].iter().copied());
            }
            eg[i] = g;
            desc.push(set.into_iter().collect());
        }
        let accumulating: Vec<Vec<usize>> = nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                let mut a = desc[i].clone();
                if node.cantor {
                    a.push(i);
                }
                a
            })
            .collect();

        let mut class = alloc::vec![0u32; n];
        let mut class_count = usize::from(n > 0);
        loop {
            let mut index: BTreeMap<(u32, bool, Vec<u32>), u32> = BTreeMap::new();
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let mut sig: Vec<u32> = accumulating[i].iter().map(|&a| class[a]).collect();
                sig.sort_unstable();
                sig.dedup();
                let key = (class[i], eg[i], sig);
                let fresh = index.len() as u32;
                next.push(*index.entry(key).or_insert(fresh));
            }
            let count = index.len();
            class = next;
            if count == class_count {
                break;
            }
            class_count = count;
        }

        GermOracle {
            nodes,
            accumulating,
            class,
            class_count,
        }
    }

    /// Interns every subtree of `trees` into an arena. Returns the oracle
    /// and the arena index of each input tree.
    pub fn from_trees(trees: &[&EndType]) -> (Self, Vec<usize>) {
        let mut ids: BTreeMap<EndType, usize> = BTreeMap::new();
        let mut nodes = Vec::new();
        let roots = trees
            .iter()
            .map(|t| intern(t, &mut ids, &mut nodes))
            .collect();
        (GermOracle::from_nodes(nodes), roots)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &RawNode {
        &self.nodes[id]
    }

    pub fn class_of(&self, id: usize) -> u32 {
        self.class[id]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn equivalent(&self, y: usize, x: usize) -> bool {
        self.class[y] == self.class[x]
    }

    /// Germ classes present in every neighborhood of `x`, including `x`'s own.
    pub fn classes_near(&self, x: usize) -> BTreeSet<u32> {
        let mut out: BTreeSet<u32> = self.accumulating[x]
            .iter()
            .map(|&a| self.class[a])
            .collect();
        out.insert(self.class[x]);
        out
    }

    pub fn preceq(&self, y: usize, x: usize) -> bool {
        let cy = self.class[y];
        cy == self.class[x] || self.accumulating[x].iter().any(|&a| self.class[a] == cy)
    }
}

fn intern(t: &EndType, ids: &mut BTreeMap<EndType, usize>, nodes: &mut Vec<RawNode>) -> usize {
    if let Some(&id) = ids.get(t) {
        return id;
    }
    let children = t.children().iter().map(|c| intern(c, ids, nodes)).collect();
    nodes.push(RawNode {
        genus: t.direct_genus(),
        cantor: t.self_accumulating(),
        children,
    });
    let id = nodes.len() - 1;
    ids.insert(t.clone(), id);
    id
}

fn check_scale(t: &EndType) -> Result<(), OracleError> {
    let (depth, branching) = (t.depth(), t.max_branching());
    if depth > ORACLE_MAX_DEPTH || branching > ORACLE_MAX_BRANCHING {
        return Err(OracleError::TooLarge { depth, branching });
    }
    Ok(())
}

/// Decides `y ≼ x` by germ bisimulation on the raw trees.
pub fn oracle_preceq(y: &EndType, x: &EndType) -> Result<bool, OracleError> {
    check_scale(y)?;
    check_scale(x)?;
    let (oracle, ids) = GermOracle::from_trees(&[y, x]);
    Ok(oracle.preceq(ids[0], ids[1]))
}

/// Decides `x ∼ y` the same way.
pub fn oracle_equivalent(x: &EndType, y: &EndType) -> Result<bool, OracleError> {
    check_scale(x)?;
    check_scale(y)?;
    let (oracle, ids) = GermOracle::from_trees(&[x, y]);
    Ok(oracle.equivalent(ids[0], ids[1]))
}

/// Every raw tree with at most `depth` levels and at most `branching`
/// distinct children per node, children listed before parents.
pub fn enumerate_arena(depth: usize, branching: usize) -> Vec<RawNode> {
    let mut nodes: Vec<RawNode> = Vec::new();
    // nodes[..lower] have depth < level - 1, nodes[lower..pool] depth level - 1
    let (mut lower, mut pool) = (0usize, 0usize);
    for level in 1..=depth {
        for set in subsets_up_to(pool, branching) {
            let exact = level == 1 || set.iter().any(|&c| c >= lower);
            if !exact {
                continue;
            }
            for flags in 0..4u8 {
                nodes.push(RawNode {
                    genus: flags & 1 != 0,
                    cantor: flags & 2 != 0,
                    children: set.clone(),
                });
            }
        }
        lower = pool;
        pool = nodes.len();
    }
    nodes
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(current.clone());
        if current.len() == k {
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Rebuilds the [`EndType`] for arena entry `id`.
pub fn arena_tree(nodes: &[RawNode], id: usize) -> EndType {
    let n = &nodes[id];
    EndType::new(
        n.genus,
        n.cantor,
        n.children.iter().map(|&c| arena_tree(nodes, c)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn spot_values() {
        let p = EndType::puncture();
        let flute = EndType::acc(vec![p.clone()]);
        let cantor_leaf = EndType::cantor(false, vec![]);
        assert_eq!(oracle_preceq(&p, &flute), Ok(true));
        assert_eq!(oracle_preceq(&flute, &p), Ok(false));
        assert_eq!(oracle_preceq(&flute, &flute), Ok(true));
        assert_eq!(oracle_preceq(&cantor_leaf, &p), Ok(false));
        // a point accumulated by one Cantor set sits inside a Cantor set
        assert_eq!(
            oracle_equivalent(&EndType::acc(vec![cantor_leaf.clone()]), &cantor_leaf),
            Ok(true)
        );
        let genus_absorbed = EndType::acc_genus(vec![EndType::acc_genus(vec![])]);
        let plain = EndType::acc(vec![EndType::acc_genus(vec![])]);
        assert_eq!(oracle_equivalent(&genus_absorbed, &plain), Ok(true));
    }

    #[test]
    fn scale_limit() {
        let deep = EndType::planar_tower(4);
        assert!(matches!(
            oracle_preceq(&deep, &deep),
            Err(OracleError::TooLarge { depth: 5, .. })
        ));
    }

    #[test]
    fn arena_counts() {
        assert_eq!(enumerate_arena(1, 3).len(), 4);
        assert_eq!(enumerate_arena(2, 3).len(), 4 + 4 * 14);
    }
}
