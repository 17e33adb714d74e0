use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::FluxError;

/// A bijection of ℤ equal to `i ↦ i + d` outside `[-radius, radius]`.
///
/// Construction normalizes the table: entries agreeing with the default are
/// dropped and the radius shrinks to the largest remaining key, so equal
/// maps compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EndPerm {
    d: i64,
    radius: i64,
    table: BTreeMap<i64, i64>,
}

/// A cut between `c - 1` and `c`; the left side is `{i < c}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CutPosition(pub i64);

impl EndPerm {
    pub fn new(d: i64, radius: i64, table: BTreeMap<i64, i64>) -> Result<Self, FluxError> {
        if radius < 0 {
            return Err(FluxError::NotBijective("negative radius"));
        }
        if let Some((&key, _)) = table.iter().find(|(k, _)| k.abs() > radius) {
            return Err(FluxError::KeyOutsideRadius { key, radius });
        }
        // The default part covers ℤ minus [-R + d, R + d], so the window has
        // to map onto that interval exactly.
        let mut hit = alloc::vec![false; (2 * radius + 1) as usize];
        for i in -radius..=radius {
            let j = table.get(&i).copied().unwrap_or(i + d) - d;
            if j.abs() > radius {
                return Err(FluxError::NotBijective("table leaves the shifted window"));
            }
            let slot = &mut hit[(j + radius) as usize];
            if *slot {
                return Err(FluxError::NotBijective("two indices share an image"));
            }
            *slot = true;
        }
        Ok(EndPerm::normalized(d, table))
    }

    fn normalized(d: i64, table: BTreeMap<i64, i64>) -> Self {
        let table: BTreeMap<i64, i64> = table.into_iter().filter(|&(i, j)| j != i + d).collect();
        let radius = table.keys().map(|k| k.abs()).max().unwrap_or(0);
        EndPerm { d, radius, table }
    }

    pub fn identity() -> Self {
        EndPerm::shift(0)
    }

    /// The full shift by `d`.
    pub fn shift(d: i64) -> Self {
        EndPerm {
            d,
            radius: 0,
            table: BTreeMap::new(),
        }
    }

    /// Swaps `a` and `b`, fixing everything else.
    pub fn transposition(a: i64, b: i64) -> Self {
        let mut table = BTreeMap::new();
        table.insert(a, b);
        table.insert(b, a);
        EndPerm::normalized(0, table)
    }

    /// A finitely supported permutation given by its nontrivial values.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, FluxError> {
        let table: BTreeMap<i64, i64> = pairs.iter().copied().collect();
        let radius = table.keys().map(|k| k.abs()).max().unwrap_or(0);
        EndPerm::new(0, radius, table)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn table(&self) -> &BTreeMap<i64, i64> {
        &self.table
    }

    pub fn apply(&self, i: i64) -> i64 {
        self.table.get(&i).copied().unwrap_or(i + self.d)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &EndPerm) -> EndPerm {
        let d = self.d + g.d;
        let radius = g.radius.max(self.radius + g.d.abs());
        let table = (-radius..=radius)
            .map(|i| (i, self.apply(g.apply(i))))
            .collect();
        EndPerm::normalized(d, table)
    }

    pub fn invert(&self) -> EndPerm {
        let d = -self.d;
        let radius = self.radius + self.d.abs();
        let mut table = BTreeMap::new();
        for (&i, &j) in &self.table {
            table.insert(j, i);
        }
        // indices of the shifted window not hit by the table come from the
        // default part of the window
        for i in -self.radius..=self.radius {
            if !self.table.contains_key(&i) {
                table.insert(i + self.d, i);
            }
        }
        let table = table
            .into_iter()
            .filter(|(k, _)| k.abs() <= radius)
            .collect();
        EndPerm::normalized(d, table)
    }

    /// Smallest and largest indices moved off the default.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.table.keys().next()?;
        let hi = *self.table.keys().next_back()?;
        Some((lo, hi))
    }
}

impl fmt::Display for EndPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm d={} table={{", self.d)?;
        for (n, (i, j)) in self.table.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}:{j}")?;
        }
        f.write_str("}")
    }
}

/// Signed crossing count at `cut`: ends carried from the left side to the
/// right minus ends carried from the right to the left.
pub fn phi(f: &EndPerm, cut: CutPosition) -> i64 {
    let c = cut.0;
    let span = f.d.abs();
    let lo = (-f.radius).min(c - span) - 1;
    let hi = f.radius.max(c + span) + 1;
    let mut net = 0;
    for i in lo..=hi {
        let j = f.apply(i);
        if i < c && j >= c {
            net += 1;
        } else if i >= c && j < c {
            net -= 1;
        }
    }
    net
}

/// Flux of one mapping class across the strips between a base maximal end
/// and each of the other `n - 1`.
pub fn theta_z(strips: &[EndPerm], n: usize) -> Result<Vec<i64>, FluxError> {
    let expected = n.saturating_sub(1);
    if strips.len() != expected {
        return Err(FluxError::StripCount {
            expected,
            got: strips.len(),
        });
    }
    Ok(strips.iter().map(|f| phi(f, CutPosition(0))).collect())
}

/// Checks `f̃ ∘ η^s ∘ f̃⁻¹ ∘ η^{-s} = f` on `[-window, window]`, where
/// `s = 2k + 1` and `f̃` applies a translate of `f` on each block
/// `[s·j - k, s·j + k]`, `j ≥ 0`.
///
/// The blocks must be disjoint for `f̃` to be a product of commuting
/// pieces; with stride `2k` neighbouring blocks share an endpoint.
pub fn swindle_check(f: &EndPerm, k: i64, window: i64) -> Result<bool, FluxError> {
    if f.d != 0 {
        return Err(FluxError::NonzeroTranslation(f.d));
    }
    if k <= 0 {
        return Err(FluxError::NonPositiveK);
    }
    if f.radius > k {
        return Err(FluxError::SupportTooLarge { k });
    }
    Ok(swindle_with_stride(f, k, 2 * k + 1, window))
}

fn swindle_with_stride(f: &EndPerm, k: i64, stride: i64, window: i64) -> bool {
    let f_inv = f.invert();
    let tilde = |g: &EndPerm, x: i64| -> i64 {
        if x < -k {
            return x;
        }
        let base = stride * (x + k).div_euclid(stride);
        base + g.apply(x - base)
    };
    (-window..=window).all(|i| {
        let x = i - stride;
        let x = tilde(&f_inv, x);
        let x = x + stride;
        tilde(f, x) == f.apply(i)
    })
}
