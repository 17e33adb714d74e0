//! Obstructions to normal generation: characters onto non-cyclic abelian
//! groups, found on a finite model of the maximal ends.
//!
//! The model keeps one end per point of each finite maximal class and one
//! representative per Cantor class. For every countable immediate
//! predecessor type `z` (and for handles) the ends admitting `z` form a
//! channel: a [`MultiEndPerm`] on rays of `z`-ends, one ray per maximal end.
//! Generators are half twists between ends of one class and shifts along a
//! channel.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::end_type::{EndType, Predecessor};
use crate::flux::{theta_tilde, MultiEndPerm};
use crate::spec::{Multiplicity, Surface};

/// A homomorphism from the mapping class group to ℤ or ℤ/2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Character {
    /// Net flux of `channel` ends into the maximal class `into`.
    Flux { channel: Predecessor, into: EndType },
    /// Flux part of the mod-2 character for a class of exactly two ends.
    FluxMod2 { channel: Predecessor },
    /// Sign of the permutation of a finite maximal class.
    Parity { root: EndType },
}

impl Character {
    pub fn is_torsion(&self) -> bool {
        !matches!(self, Character::Flux { .. })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Flux { channel, into } => write!(f, "FLUX({channel} into {into})"),
            Character::FluxMod2 { channel } => write!(f, "FLUX_MOD2({channel})"),
            Character::Parity { root } => write!(f, "PARITY({root})"),
        }
    }
}

/// `ℤ^free_rank × (ℤ/2)^torsion2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WitnessTarget {
    pub free_rank: usize,
    pub torsion2: usize,
}

impl WitnessTarget {
    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion2 <= 1
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ObstructionWitness {
    pub target: WitnessTarget,
    pub characters: Vec<Character>,
    /// Image of each named model generator, one entry per character.
    pub generator_images: Vec<(String, Vec<i64>)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Channel {
    pub kind: Predecessor,
    /// Model end behind each ray.
    pub rays: Vec<usize>,
}

/// Finite model of the maximal ends of a surface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceModel {
    /// Root index of each modeled end.
    pub ends: Vec<usize>,
    pub roots: Vec<(EndType, Multiplicity)>,
    pub channels: Vec<Channel>,
}

/// A model mapping class: a permutation of the modeled ends together with
/// its action on every channel.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelElement {
    pub perm: Vec<usize>,
    pub channels: Vec<MultiEndPerm>,
}

impl ModelElement {
    /// `self ∘ other`.
    pub fn compose(&self, other: &ModelElement) -> ModelElement {
        ModelElement {
            perm: other.perm.iter().map(|&e| self.perm[e]).collect(),
            channels: self
                .channels
                .iter()
                .zip(&other.channels)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn invert(&self) -> ModelElement {
        let mut perm = alloc::vec![0usize; self.perm.len()];
        for (e, &t) in self.perm.iter().enumerate() {
            perm[t] = e;
        }
        ModelElement {
            perm,
            channels: self.channels.iter().map(MultiEndPerm::invert).collect(),
        }
    }
}

impl SurfaceModel {
    pub fn new(surface: &Surface) -> SurfaceModel {
        let roots: Vec<(EndType, Multiplicity)> = surface
            .roots()
            .iter()
            .map(|r| (r.end_type.clone(), r.multiplicity))
            .collect();
        let mut ends = Vec::new();
        for (i, (_, m)) in roots.iter().enumerate() {
            let copies = match m {
                Multiplicity::Finite(n) => *n as usize,
                Multiplicity::Cantor => 1,
            };
            ends.extend(core::iter::repeat_n(i, copies));
        }
        let mut admitting: BTreeMap<Predecessor, Vec<usize>> = BTreeMap::new();
        for (e, &r) in ends.iter().enumerate() {
            for p in roots[r].0.immediate_predecessors() {
                if matches!(&p, Predecessor::End(t) if t.self_accumulating()) {
                    continue;
                }
                admitting.entry(p).or_default().push(e);
            }
        }
        let channels = admitting
            .into_iter()
            .filter(|(_, rays)| rays.len() >= 2)
            .map(|(kind, rays)| Channel { kind, rays })
            .collect();
        SurfaceModel {
            ends,
            roots,
            channels,
        }
    }

    pub fn identity(&self) -> ModelElement {
        ModelElement {
            perm: (0..self.ends.len()).collect(),
            channels: self
                .channels
                .iter()
                .map(|c| MultiEndPerm::identity(c.rays.len()))
                .collect(),
        }
    }

    fn element_for_perm(&self, perm: Vec<usize>) -> ModelElement {
        let channels = self
            .channels
            .iter()
            .map(|c| {
                let rho = c
                    .rays
                    .iter()
                    .map(|e| c.rays.iter().position(|x| *x == perm[*e]).unwrap())
                    .collect();
                MultiEndPerm::permutation(rho)
            })
            .collect();
        ModelElement { perm, channels }
    }

    fn end_label(&self, e: usize) -> String {
        let r = self.ends[e];
        let k = self.ends[..e].iter().filter(|&&x| x == r).count();
        format!("{}#{}", r, k)
    }

    /// Half twists between consecutive ends of each finite class, then one
    /// shift per channel and ordered pair of rays.
    pub fn generators(&self) -> Vec<(String, ModelElement)> {
        let mut out = Vec::new();
        for e in 1..self.ends.len() {
            if self.ends[e] == self.ends[e - 1] {
                let mut perm: Vec<usize> = (0..self.ends.len()).collect();
                perm.swap(e - 1, e);
                let name = format!("g({}<->{})", self.end_label(e - 1), self.end_label(e));
                out.push((name, self.element_for_perm(perm)));
            }
        }
        for (ci, c) in self.channels.iter().enumerate() {
            let letter = match c.kind {
                Predecessor::Handle => "h",
                Predecessor::End(_) => "eta",
            };
            for a in 0..c.rays.len() {
                for b in a + 1..c.rays.len() {
                    let mut el = self.identity();
                    el.channels[ci] = MultiEndPerm::shift(c.rays.len(), a, b);
                    let name = format!(
                        "{letter}[{}]({}->{})",
                        c.kind,
                        self.end_label(c.rays[a]),
                        self.end_label(c.rays[b])
                    );
                    out.push((name, el));
                }
            }
        }
        out
    }

    fn root_index(&self, t: &EndType) -> Option<usize> {
        self.roots.iter().position(|(r, _)| r == t)
    }

    fn channel_index(&self, kind: &Predecessor) -> Option<usize> {
        self.channels.iter().position(|c| c.kind == *kind)
    }

    /// Every character this model can evaluate, most informative first.
    pub fn candidate_characters(&self) -> Vec<Character> {
        let mut flux = Vec::new();
        let mut mod2 = Vec::new();
        let mut parity = Vec::new();
        for c in &self.channels {
            for (r, (t, m)) in self.roots.iter().enumerate() {
                if m.is_cantor() {
                    continue;
                }
                let inside = c.rays.iter().filter(|&&e| self.ends[e] == r).count();
                if inside > 0 && inside < c.rays.len() {
                    flux.push(Character::Flux {
                        channel: c.kind.clone(),
                        into: t.clone(),
                    });
                }
                if *m == Multiplicity::Finite(2) && inside == 2 && c.rays.len() == 2 {
                    mod2.push(Character::FluxMod2 {
                        channel: c.kind.clone(),
                    });
                }
            }
        }
        for (t, m) in &self.roots {
            if let Multiplicity::Finite(n) = m {
                if *n >= 2 {
                    parity.push(Character::Parity { root: t.clone() });
                }
            }
        }
        flux.extend(mod2);
        flux.extend(parity);
        flux
    }

    /// Value of `ch` on `el`; torsion characters are reduced mod 2.
    /// `None` if the character does not belong to this model.
    pub fn evaluate(&self, ch: &Character, el: &ModelElement) -> Option<i64> {
        match ch {
            Character::Parity { root } => {
                let r = self.root_index(root)?;
                let class: Vec<usize> = (0..self.ends.len())
                    .filter(|&e| self.ends[e] == r)
                    .collect();
                let local: Vec<usize> = class
                    .iter()
                    .map(|&e| class.iter().position(|&x| x == el.perm[e]))
                    .collect::<Option<_>>()?;
                Some(i64::from(MultiEndPerm::permutation(local).parity()))
            }
            Character::Flux { channel, into } => {
                let ci = self.channel_index(channel)?;
                let r = self.root_index(into)?;
                let rays: Vec<usize> = (0..self.channels[ci].rays.len())
                    .filter(|&k| self.ends[self.channels[ci].rays[k]] == r)
                    .collect();
                el.channels[ci].flux_into(&rays).ok()
            }
            Character::FluxMod2 { channel } => {
                let ci = self.channel_index(channel)?;
                let (flux, _) = theta_tilde(&el.channels[ci], &[(0, 1)]).ok()?;
                Some(i64::from(flux))
            }
        }
    }

    /// The first pair of candidates, in priority order, whose generator
    /// images generate the target group, restricted to `allowed`.
    pub fn find_witness(&self, allowed: impl Fn(&Character) -> bool) -> Option<ObstructionWitness> {
        let candidates: Vec<Character> = self
            .candidate_characters()
            .into_iter()
            .filter(|c| allowed(c))
            .collect();
        let generators = self.generators();
        let images: Vec<Vec<i64>> = candidates
            .iter()
            .map(|ch| {
                generators
                    .iter()
                    .map(|(_, g)| self.evaluate(ch, g).unwrap_or(0))
                    .collect()
            })
            .collect();
        for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                let torsion = [candidates[i].is_torsion(), candidates[j].is_torsion()];
                let columns: Vec<[i64; 2]> = (0..generators.len())
                    .map(|g| [images[i][g], images[j][g]])
                    .collect();
                if generates(&columns, torsion) {
                    let torsion2 = torsion.iter().filter(|&&t| t).count();
                    return Some(ObstructionWitness {
                        target: WitnessTarget {
                            free_rank: 2 - torsion2,
                            torsion2,
                        },
                        characters: alloc::vec![candidates[i].clone(), candidates[j].clone()],
                        generator_images: generators
                            .iter()
                            .zip(columns)
                            .map(|((name, _), col)| (name.clone(), col.to_vec()))
                            .collect(),
                    });
                }
            }
        }
        None
    }
}

/// Whether `columns` generate `ℤ² / ⟨2e_i : torsion[i]⟩`.
fn generates(columns: &[[i64; 2]], torsion: [bool; 2]) -> bool {
    let mut vectors: Vec<[i64; 2]> = columns
        .iter()
        .map(|c| {
            let mut v = *c;
            for k in 0..2 {
                if torsion[k] {
                    v[k] = v[k].rem_euclid(2);
                }
            }
            v
        })
        .collect();
    for k in 0..2 {
        if torsion[k] {
            let mut v = [0, 0];
            v[k] = 2;
            vectors.push(v);
        }
    }
    let mut g = 0i64;
    for a in 0..vectors.len() {
        for b in a + 1..vectors.len() {
            let det = vectors[a][0] * vectors[b][1] - vectors[a][1] * vectors[b][0];
            g = gcd(g, det.abs());
        }
    }
    g == 1
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
