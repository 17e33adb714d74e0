use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::FluxError;

/// Behaviour of one source ray: index `k ≥ radius` goes to
/// `(target, k + offset)`, smaller indices follow `table[k]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RayMap {
    pub offset: i64,
    pub table: Vec<(usize, u64)>,
}

impl RayMap {
    fn radius(&self) -> u64 {
        self.table.len() as u64
    }
}

/// A bijection of `n` disjoint copies of ℕ that permutes the rays up to
/// finitely many exceptions. Ray `r` is eventually carried into ray
/// `rho[r]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiEndPerm {
    rho: Vec<usize>,
    rays: Vec<RayMap>,
}

impl MultiEndPerm {
    pub fn new(rho: Vec<usize>, rays: Vec<RayMap>) -> Result<Self, FluxError> {
        let n = rho.len();
        if rays.len() != n {
            return Err(FluxError::NotBijective("ray count differs from rho"));
        }
        let mut seen = alloc::vec![false; n];
        for &t in &rho {
            if t >= n {
                return Err(FluxError::RayOutOfRange(t));
            }
            if core::mem::replace(&mut seen[t], true) {
                return Err(FluxError::NotBijective("rho is not a permutation"));
            }
        }
        let mut inverse = alloc::vec![0usize; n];
        for (r, &t) in rho.iter().enumerate() {
            inverse[t] = r;
        }
        // table images on ray t must be exactly the indices below the first
        // default image on t
        let mut landing: Vec<Vec<bool>> = Vec::with_capacity(n);
        for &r in &inverse {
            let first_default = rays[r].radius() as i64 + rays[r].offset;
            if first_default < 0 {
                return Err(FluxError::NotBijective("offset runs off the ray"));
            }
            landing.push(alloc::vec![false; first_default as usize]);
        }
        for ray in &rays {
            for &(t, k) in &ray.table {
                if t >= n {
                    return Err(FluxError::RayOutOfRange(t));
                }
                match landing[t].get_mut(k as usize) {
                    Some(slot) if !*slot => *slot = true,
                    Some(_) => return Err(FluxError::NotBijective("two points share an image")),
                    None => return Err(FluxError::NotBijective("table hits the default range")),
                }
            }
        }
        if landing.iter().flatten().any(|hit| !hit) {
            return Err(FluxError::NotBijective("a point has no preimage"));
        }
        Ok(MultiEndPerm::normalized(rho, rays))
    }

    /// Trims trailing table entries that agree with the default.
    fn normalized(rho: Vec<usize>, mut rays: Vec<RayMap>) -> Self {
        for (r, ray) in rays.iter_mut().enumerate() {
            while let Some(&(t, k)) = ray.table.last() {
                let idx = ray.table.len() as i64 - 1;
                if t == rho[r] && k as i64 == idx + ray.offset {
                    ray.table.pop();
                } else {
                    break;
                }
            }
        }
        MultiEndPerm { rho, rays }
    }

    pub fn identity(n: usize) -> Self {
        MultiEndPerm::permutation((0..n).collect())
    }

    /// Moves whole rays, `(r, k) ↦ (rho[r], k)`.
    pub fn permutation(rho: Vec<usize>) -> Self {
        let rays = rho
            .iter()
            .map(|_| RayMap {
                offset: 0,
                table: Vec::new(),
            })
            .collect();
        MultiEndPerm { rho, rays }
    }

    /// Half twist exchanging rays `i` and `j`.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut rho: Vec<usize> = (0..n).collect();
        rho.swap(i, j);
        MultiEndPerm::permutation(rho)
    }

    /// Shift moving one end from ray `from` to ray `to`:
    /// `(from, k) ↦ (from, k - 1)`, `(from, 0) ↦ (to, 0)`, `(to, k) ↦ (to, k + 1)`.
    pub fn shift(n: usize, from: usize, to: usize) -> Self {
        let mut p = MultiEndPerm::identity(n);
        p.rays[from] = RayMap {
            offset: -1,
            table: alloc::vec![(to, 0)],
        };
        p.rays[to].offset = 1;
        p
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn rays(&self) -> &[RayMap] {
        &self.rays
    }

    pub fn apply(&self, ray: usize, k: u64) -> (usize, u64) {
        let m = &self.rays[ray];
        match m.table.get(k as usize) {
            Some(&p) => p,
            None => (self.rho[ray], (k as i64 + m.offset) as u64),
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &MultiEndPerm) -> MultiEndPerm {
        let n = self.n();
        let mut rho = Vec::with_capacity(n);
        let mut rays = Vec::with_capacity(n);
        for r in 0..n {
            let s = g.rho[r];
            let og = g.rays[r].offset;
            let radius = (g.rays[r].radius() as i64)
                .max(self.rays[s].radius() as i64 - og)
                .max(0);
            rho.push(self.rho[s]);
            rays.push(RayMap {
                offset: og + self.rays[s].offset,
                table: (0..radius as u64)
                    .map(|k| {
                        let (t, m) = g.apply(r, k);
                        self.apply(t, m)
                    })
                    .collect(),
            });
        }
        MultiEndPerm::normalized(rho, rays)
    }

    pub fn invert(&self) -> MultiEndPerm {
        let n = self.n();
        let mut preimage: BTreeMap<(usize, u64), (usize, u64)> = BTreeMap::new();
        for (r, ray) in self.rays.iter().enumerate() {
            for (k, &p) in ray.table.iter().enumerate() {
                preimage.insert(p, (r, k as u64));
            }
        }
        let mut rho = alloc::vec![0usize; n];
        let mut rays: Vec<RayMap> = (0..n)
            .map(|_| RayMap {
                offset: 0,
                table: Vec::new(),
            })
            .collect();
        for (r, ray) in self.rays.iter().enumerate() {
            let t = self.rho[r];
            rho[t] = r;
            let first_default = (ray.radius() as i64 + ray.offset) as u64;
            rays[t] = RayMap {
                offset: -ray.offset,
                table: (0..first_default).map(|k| preimage[&(t, k)]).collect(),
            };
        }
        MultiEndPerm::normalized(rho, rays)
    }

    /// Net number of points carried into the union of `set` from outside.
    /// The set must be a union of `rho`-orbits.
    pub fn flux_into(&self, set: &[usize]) -> Result<i64, FluxError> {
        let n = self.n();
        let mut inside = alloc::vec![false; n];
        for &r in set {
            if r >= n {
                return Err(FluxError::RayOutOfRange(r));
            }
            inside[r] = true;
        }
        if (0..n).any(|r| inside[r] != inside[self.rho[r]]) {
            return Err(FluxError::NotBijective("ray set is not rho-invariant"));
        }
        let mut net = 0;
        for (r, ray) in self.rays.iter().enumerate() {
            for &(t, _) in &ray.table {
                match (inside[r], inside[t]) {
                    (false, true) => net += 1,
                    (true, false) => net -= 1,
                    _ => {}
                }
            }
        }
        Ok(net)
    }

    /// Sign of `rho`: 0 for even, 1 for odd.
    pub fn parity(&self) -> u8 {
        permutation_parity(&self.rho)
    }
}

fn permutation_parity(p: &[usize]) -> u8 {
    let mut seen = alloc::vec![false; p.len()];
    let mut transpositions = 0usize;
    for start in 0..p.len() {
        let mut len = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    (transpositions % 2) as u8
}

/// `Θ̃(f) = (Σ_{r ≥ 1} flux into ray r of f∘g  mod 2, sgn rho)` where `g` is a
/// product of the designated half twists undoing the ray permutation of `f`.
/// A shortest such product is found by breadth-first search.
pub fn theta_tilde(f: &MultiEndPerm, twists: &[(usize, usize)]) -> Result<(u8, u8), FluxError> {
    let word = twist_word(f.n(), twists, f.rho())?;
    theta_tilde_with_word(f, &word)
}

/// [`theta_tilde`] with an explicit word `g = t_1 ∘ t_2 ∘ ⋯`.
pub fn theta_tilde_with_word(
    f: &MultiEndPerm,
    word: &[(usize, usize)],
) -> Result<(u8, u8), FluxError> {
    let n = f.n();
    let mut g = MultiEndPerm::identity(n);
    for &(i, j) in word {
        if i >= n || j >= n {
            return Err(FluxError::RayOutOfRange(i.max(j)));
        }
        g = g.compose(&MultiEndPerm::swap(n, i, j));
    }
    let fg = f.compose(&g);
    if fg.rho.iter().enumerate().any(|(r, &t)| r != t) {
        return Err(FluxError::WrongWord);
    }
    let mut flux = 0i64;
    for r in 1..n {
        flux += fg.flux_into(&[r])?;
    }
    Ok((flux.rem_euclid(2) as u8, f.parity()))
}

fn twist_word(
    n: usize,
    twists: &[(usize, usize)],
    rho: &[usize],
) -> Result<Vec<(usize, usize)>, FluxError> {
    if n > 6 {
        return Err(FluxError::TooManyRays(n));
    }
    if let Some(&(i, j)) = twists.iter().find(|(i, j)| *i >= n || *j >= n) {
        return Err(FluxError::RayOutOfRange(i.max(j)));
    }
    let mut target = alloc::vec![0usize; n];
    for (r, &t) in rho.iter().enumerate() {
        target[t] = r;
    }
    // permutations reached by right-multiplying twists onto the identity
    let start: Vec<usize> = (0..n).collect();
    // each permutation maps to its predecessor and the twist applied to it
    type Step = Option<(Vec<usize>, (usize, usize))>;
    let mut parent: BTreeMap<Vec<usize>, Step> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for &(i, j) in twists {
            // (p ∘ t)(x) = p(t(x)) swaps the entries at i and j
            let mut q = p.clone();
            q.swap(i, j);
            if !parent.contains_key(&q) {
                parent.insert(q.clone(), Some((p.clone(), (i, j))));
                queue.push_back(q);
            }
        }
    }
    let factorial: usize = (1..=n).product();
    if parent.len() != factorial {
        return Err(FluxError::TwistsDoNotGenerate);
    }
    let mut word = Vec::new();
    let mut cur = target;
    while let Some(Some((prev, t))) = parent.get(&cur).cloned() {
        word.push(t);
        cur = prev;
    }
    word.reverse();
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn chain(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    #[test]
    fn validation() {
        let bad = MultiEndPerm::new(
            vec![0, 1],
            vec![
                RayMap {
                    offset: -1,
                    table: vec![(1, 0)],
                },
                RayMap {
                    offset: 0,
                    table: vec![],
                },
            ],
        );
        assert!(bad.is_err());
        let s = MultiEndPerm::shift(2, 0, 1);
        assert_eq!(MultiEndPerm::new(s.rho.clone(), s.rays.clone()), Ok(s));
    }

    #[test]
    fn compose_and_invert() {
        let s = MultiEndPerm::shift(3, 0, 2);
        let t = MultiEndPerm::swap(3, 0, 1);
        let st = s.compose(&t);
        assert_eq!(st.apply(1, 0), (2, 0));
        assert_eq!(st.apply(0, 4), (1, 4));
        assert_eq!(st.compose(&st.invert()), MultiEndPerm::identity(3));
        assert_eq!(st.invert().compose(&st), MultiEndPerm::identity(3));
    }

    #[test]
    fn flux_of_shift() {
        let s = MultiEndPerm::shift(3, 0, 1);
        assert_eq!(s.flux_into(&[1]), Ok(1));
        assert_eq!(s.flux_into(&[0]), Ok(-1));
        assert_eq!(s.flux_into(&[2]), Ok(0));
        assert!(MultiEndPerm::swap(3, 0, 1).flux_into(&[0]).is_err());
    }

    #[test]
    fn theta_tilde_examples() {
        let twists = chain(2);
        assert_eq!(
            theta_tilde(&MultiEndPerm::swap(2, 0, 1), &twists),
            Ok((0, 1))
        );
        assert_eq!(
            theta_tilde(&MultiEndPerm::shift(2, 0, 1), &twists),
            Ok((1, 0))
        );
        // Jacob's ladder: a half twist σ and the twist-with-flux τ = σ∘η
        let sigma = MultiEndPerm::swap(2, 0, 1);
        let tau = sigma.compose(&MultiEndPerm::shift(2, 0, 1));
        assert_eq!(theta_tilde(&sigma, &twists), Ok((0, 1)));
        assert_eq!(theta_tilde(&tau, &twists), Ok((1, 1)));
    }

    #[test]
    fn twists_must_generate() {
        assert_eq!(
            theta_tilde(&MultiEndPerm::identity(3), &[(0, 1)]),
            Err(FluxError::TwistsDoNotGenerate)
        );
    }

    #[test]
    fn word_must_undo_rho() {
        assert_eq!(
            theta_tilde_with_word(&MultiEndPerm::swap(3, 0, 1), &[(1, 2)]),
            Err(FluxError::WrongWord)
        );
        let f = MultiEndPerm::swap(3, 0, 2);
        let a = theta_tilde_with_word(&f, &[(0, 2)]).unwrap();
        let b = theta_tilde_with_word(&f, &[(0, 1), (1, 2), (0, 1)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flux_part_is_not_conjugation_invariant_for_three_rays() {
        let twists = chain(3);
        let eta = MultiEndPerm::shift(3, 1, 2);
        let g = MultiEndPerm::swap(3, 0, 1);
        let conj = g.compose(&eta).compose(&g.invert());
        assert_eq!(theta_tilde(&eta, &twists), Ok((0, 0)));
        assert_eq!(theta_tilde(&conj, &twists), Ok((1, 0)));
    }
}
