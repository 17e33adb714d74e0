//! Seeded randomized checks of the flux models, shared by the CLI and the
//! test suite.

use std::collections::BTreeMap;
use std::fmt;

use endcalc_core::flux::{
    normalizer, phi, swindle_check, theta_tilde, theta_tilde_with_word, verify_normalization,
    CutPosition, EndPerm, MultiEndPerm, ShiftSpec, Tail,
};
use endcalc_core::witness::{ModelElement, SurfaceModel};
use endcalc_core::{ObstructionWitness, Surface};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Additivity,
    Theta,
    Normalize,
    Swindle,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "additivity" => Ok(Suite::Additivity),
            "theta" => Ok(Suite::Theta),
            "normalize" => Ok(Suite::Normalize),
            "swindle" => Ok(Suite::Swindle),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

/// Outcome of a suite: how many cases ran and the first few violations.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub cases: usize,
    pub violations: Vec<String>,
    pub failures: usize,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.violations.len() < 5 {
                self.violations.push(describe());
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "ok ({} checks)", self.cases)
        } else {
            write!(f, "{} of {} checks failed", self.failures, self.cases)?;
            for v in &self.violations {
                write!(f, "\n  {v}")?;
            }
            Ok(())
        }
    }
}

pub fn run_suite(suite: Suite, n: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Additivity => phi_suite(&mut rng, n),
        Suite::Theta => theta_suite(&mut rng, n, 2..=5),
        Suite::Normalize => normalize_suite(&mut rng, n),
        Suite::Swindle => swindle_suite(3, 200),
    }
}

pub fn random_end_perm(rng: &mut impl Rng) -> EndPerm {
    let d = rng.gen_range(-3i64..=3);
    let r = rng.gen_range(0i64..=4);
    let mut images: Vec<i64> = (-r..=r).map(|i| i + d).collect();
    images.shuffle(rng);
    let table: BTreeMap<i64, i64> = (-r..=r).zip(images).collect();
    EndPerm::new(d, r, table).expect("shuffled window is a bijection")
}

pub fn phi_suite(rng: &mut impl Rng, pairs: usize) -> SuiteReport {
    let mut rep = SuiteReport::default();
    rep.check(phi(&EndPerm::shift(1), CutPosition(0)) == 1, || {
        "phi(full shift) != 1".into()
    });
    for _ in 0..pairs {
        let f = random_end_perm(rng);
        let g = random_end_perm(rng);
        let fg = f.compose(&g);
        let conj = g.compose(&f).compose(&g.invert());
        let f_inv = f.invert();
        for _ in 0..10 {
            let cut = CutPosition(rng.gen_range(-10..=10));
            let (pf, pg) = (phi(&f, cut), phi(&g, cut));
            rep.check(phi(&fg, cut) == pf + pg, || {
                format!("additivity: {f} ; {g} at {cut:?}")
            });
            rep.check(phi(&f_inv, cut) == -pf, || {
                format!("inverse: {f} at {cut:?}")
            });
            rep.check(pf == f.d(), || format!("cut independence: {f} at {cut:?}"));
            rep.check(phi(&conj, cut) == pf, || {
                format!("conjugation: {f} by {g} at {cut:?}")
            });
        }
    }
    rep
}

/// A random product of half twists and single-end shifts on `n` rays.
pub fn random_multi(rng: &mut impl Rng, n: usize) -> MultiEndPerm {
    let mut f = MultiEndPerm::identity(n);
    for _ in 0..rng.gen_range(0..=8) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let g = if rng.gen_bool(0.5) {
            MultiEndPerm::swap(n, a, b)
        } else {
            MultiEndPerm::shift(n, a, b)
        };
        f = if rng.gen_bool(0.5) {
            f.compose(&g)
        } else {
            f.compose(&g.invert())
        };
    }
    f
}

pub fn chain(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// Homomorphism and representative independence of `Θ̃`, plus the ladder
/// values. Pairs cycle through the ray counts in `rays`.
pub fn theta_suite(
    rng: &mut impl Rng,
    pairs: usize,
    rays: std::ops::RangeInclusive<usize>,
) -> SuiteReport {
    let mut rep = SuiteReport::default();
    let twists = chain(2);
    let sigma = MultiEndPerm::swap(2, 0, 1);
    let tau = sigma.compose(&MultiEndPerm::shift(2, 0, 1));
    rep.check(theta_tilde(&sigma, &twists) == Ok((0, 1)), || {
        "ladder: sigma".into()
    });
    rep.check(theta_tilde(&tau, &twists) == Ok((1, 1)), || {
        "ladder: tau".into()
    });

    let counts: Vec<usize> = rays.collect();
    for k in 0..pairs {
        let n = counts[k % counts.len()];
        let twists = chain(n);
        let f = random_multi(rng, n);
        let g = random_multi(rng, n);
        let (Ok(a), Ok(b), Ok(ab)) = (
            theta_tilde(&f, &twists),
            theta_tilde(&g, &twists),
            theta_tilde(&f.compose(&g), &twists),
        ) else {
            rep.check(false, || format!("theta undefined on n = {n}"));
            continue;
        };
        rep.check(ab == ((a.0 + b.0) % 2, (a.1 + b.1) % 2), || {
            format!("homomorphism fails on n = {n}: {a:?} + {b:?} != {ab:?}")
        });

        // another factorization: a random detour t ∘ t spliced into a word
        let mut word = undo_word(f.rho());
        let t = twists[rng.gen_range(0..twists.len())];
        let at = rng.gen_range(0..=word.len());
        word.splice(at..at, [t, t]);
        rep.check(theta_tilde_with_word(&f, &word) == Ok(a), || {
            format!("factorization dependence on n = {n}")
        });
    }
    rep
}

/// Adjacent transpositions `g = t_1 ∘ ⋯` with `rho ∘ rho_g = id`, by bubble sort.
fn undo_word(rho: &[usize]) -> Vec<(usize, usize)> {
    // rho_g must equal rho⁻¹; sort rho⁻¹ to the identity with adjacent swaps
    // and read the swaps backwards
    let mut p = vec![0usize; rho.len()];
    for (r, &t) in rho.iter().enumerate() {
        p[t] = r;
    }
    let mut swaps = Vec::new();
    for i in 0..p.len() {
        for j in (i + 1..p.len()).rev() {
            if p[j - 1] > p[j] {
                p.swap(j - 1, j);
                swaps.push((j - 1, j));
            }
        }
    }
    swaps.reverse();
    swaps
}

pub fn random_shift(rng: &mut impl Rng) -> ShiftSpec {
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=8);
        ShiftSpec::finite((0..k).map(|_| rng.gen_range(-40i64..=40)))
    } else {
        let p = rng.gen_range(2i64..=7);
        let mut residues: Vec<i64> = (0..p).collect();
        residues.shuffle(rng);
        residues.truncate(rng.gen_range(1..p as usize));
        let tail = *[Tail::Upper, Tail::Lower, Tail::Both].choose(rng).unwrap();
        ShiftSpec::periodic(rng.gen_range(-10..=30), p, residues, tail)
            .expect("residues are a proper nonempty subset")
    }
}

pub fn normalize_suite(rng: &mut impl Rng, specs: usize) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for _ in 0..specs {
        let s = random_shift(rng);
        let ok = normalizer(&s).is_ok_and(|t| verify_normalization(&s, &t, 200));
        rep.check(ok, || format!("normalization fails for {s}"));
    }
    rep
}

/// Every permutation supported in `[-k, k]` for each `k ≤ max_k`.
pub fn swindle_suite(max_k: i64, window: i64) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for k in 1..=max_k {
        let points: Vec<i64> = (-k..=k).collect();
        for_each_permutation(&points, |images| {
            let pairs: Vec<(i64, i64)> =
                points.iter().copied().zip(images.iter().copied()).collect();
            let f = EndPerm::from_pairs(&pairs).expect("permutation of the window");
            rep.check(swindle_check(&f, k, window) == Ok(true), || {
                format!("swindle fails for {f} with k = {k}")
            });
        });
    }
    rep
}

fn for_each_permutation(items: &[i64], mut visit: impl FnMut(&[i64])) {
    fn heap(k: usize, a: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
        if k <= 1 {
            visit(a);
            return;
        }
        for i in 0..k {
            heap(k - 1, a, visit);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            if i + 1 < k {
                a.swap(j, k - 1);
            }
        }
    }
    let mut a = items.to_vec();
    heap(a.len(), &mut a, &mut visit);
}

/// Checks that the witness characters are additive on random products of
/// model generators and that the stated generator images generate the
/// target group.
pub fn check_witness(
    surface: &Surface,
    w: &ObstructionWitness,
    products: usize,
    seed: u64,
) -> Result<(), String> {
    if w.target.is_cyclic() {
        return Err("target group is cyclic".into());
    }
    if w.characters.len() != w.target.free_rank + w.target.torsion2 {
        return Err("character count differs from target rank".into());
    }
    let model = SurfaceModel::new(surface);
    let generators = model.generators();
    let reduce = |values: Vec<i64>| -> Vec<i64> {
        values
            .into_iter()
            .zip(&w.characters)
            .map(|(v, c)| if c.is_torsion() { v.rem_euclid(2) } else { v })
            .collect()
    };
    let eval = |el: &ModelElement| -> Result<Vec<i64>, String> {
        let values = w
            .characters
            .iter()
            .map(|c| {
                model
                    .evaluate(c, el)
                    .ok_or_else(|| format!("{c} is not defined on the model"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(reduce(values))
    };

    let mut images = Vec::new();
    for ((name, g), (stated_name, stated)) in generators.iter().zip(&w.generator_images) {
        let value = eval(g)?;
        if name != stated_name || reduce(stated.clone()) != value {
            return Err(format!("stated image of {stated_name} is wrong"));
        }
        images.push(value);
    }
    if generators.len() != w.generator_images.len() {
        return Err("generator list differs from the model".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..products {
        let mut el = model.identity();
        let mut expected = vec![0i64; w.characters.len()];
        for _ in 0..rng.gen_range(1..=10) {
            let i = rng.gen_range(0..generators.len());
            let inverse = rng.gen_bool(0.5);
            let g = if inverse {
                generators[i].1.invert()
            } else {
                generators[i].1.clone()
            };
            el = el.compose(&g);
            for (e, v) in expected.iter_mut().zip(&images[i]) {
                *e += if inverse { -v } else { *v };
            }
        }
        if eval(&el)? != reduce(expected) {
            return Err("characters are not additive on a random product".into());
        }
    }

    if !spans_target(
        &images,
        &w.characters
            .iter()
            .map(|c| c.is_torsion())
            .collect::<Vec<_>>(),
    ) {
        return Err("generator images do not generate the target".into());
    }
    Ok(())
}

/// Whether the vectors generate `ℤ^k / ⟨2e_i : torsion[i]⟩`, by Hermite
/// reduction over the integers.
fn spans_target(images: &[Vec<i64>], torsion: &[bool]) -> bool {
    let k = torsion.len();
    let mut rows: Vec<Vec<i64>> = images.to_vec();
    for (i, &t) in torsion.iter().enumerate() {
        if t {
            let mut v = vec![0; k];
            v[i] = 2;
            rows.push(v);
        }
    }
    for col in 0..k {
        // gcd-reduce column `col` among rows with zero leading part
        let start = col;
        loop {
            let mut live: Vec<usize> = (start..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if live.len() <= 1 {
                match live.pop() {
                    Some(r) => rows.swap(start, r),
                    None => return false,
                }
                break;
            }
            live.sort_by_key(|&r| rows[r][col].abs());
            let pivot = live[0];
            for &r in &live[1..] {
                let q = rows[r][col] / rows[pivot][col];
                let pivot_row = rows[pivot].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= q * p;
                }
            }
        }
        if rows[start][col].abs() != 1 {
            return false;
        }
    }
    true
}
