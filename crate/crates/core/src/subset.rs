//! The Johnson geometry: `s`-subsets of `N = {1..n}` under `S_n`.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::level::{Family, Geometry, LevelCache, LevelIndex};
use crate::qcomb::{binomial, ExactInteger, QParameter};

/// Largest ground set the subset family will enumerate.
pub const MAX_SUBSET_N: usize = 20;

/// A subset of `{1..n}`; bit `i` stands for element `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    bits: u32,
    n: u8,
}

pub type SubsetLevelIndex = LevelIndex<Subset>;

impl Subset {
    pub fn from_members(n: usize, members: &[usize]) -> Result<Self> {
        if n > MAX_SUBSET_N {
            return Err(invalid(format!("n = {n} exceeds {MAX_SUBSET_N}")));
        }
        let mut bits = 0u32;
        for &m in members {
            if m == 0 || m > n {
                return Err(invalid(format!("element {m} outside 1..={n}")));
            }
            bits |= 1 << (m - 1);
        }
        Ok(Self { bits, n: n as u8 })
    }

    pub(crate) fn from_bits(n: usize, bits: u32) -> Self {
        Self { bits, n: n as u8 }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains_element(self, m: usize) -> bool {
        m >= 1 && m <= self.n() && self.bits & (1 << (m - 1)) != 0
    }

    /// Sorted 1-based members.
    pub fn members(self) -> Vec<usize> {
        (1..=self.n()).filter(|&m| self.contains_element(m)).collect()
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.bits & !other.bits == 0
    }

    /// `N - X`.
    pub fn complement(self) -> Subset {
        Subset {
            bits: !self.bits & full_mask(self.n()),
            n: self.n,
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members())
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `d(X, X') = |X| - |X ∩ X'|`; both sets must have the same size.
pub fn distance(x: Subset, y: Subset) -> Result<usize> {
    if x.len() != y.len() || x.n != y.n {
        return Err(Error::DimensionMismatch(format!("{x:?} vs {y:?}")));
    }
    Ok(pseudo_distance(x, y))
}

/// `ℓ(Y, X) = |Y - X|`.
pub fn pseudo_distance(y: Subset, x: Subset) -> usize {
    (y.bits & !x.bits).count_ones() as usize
}

/// All `s`-subsets of `{1..n}` in colexicographic order. The first one is
/// `{1..s}`, so the basepoint lands on rank 0 without reordering.
pub fn enumerate_level(n: usize, s: usize) -> Result<SubsetLevelIndex> {
    if n > MAX_SUBSET_N {
        return Err(invalid(format!("n = {n} exceeds the bound {MAX_SUBSET_N}")));
    }
    if s > n {
        return Err(invalid(format!("s = {s} exceeds n = {n}")));
    }
    let mut points = Vec::new();
    if s == 0 {
        points.push(Subset::from_bits(n, 0));
    } else {
        // Gosper's hack walks fixed-popcount words in increasing order,
        // which is colex order on the corresponding sets.
        let mut w: u64 = (1 << s) - 1;
        while w < (1u64 << n) {
            points.push(Subset::from_bits(n, w as u32));
            let c = w & w.wrapping_neg();
            let r = w + c;
            w = (((r ^ w) >> 2) / c) | r;
        }
    }
    debug_assert_eq!(points[0].bits, full_mask(s));
    Ok(LevelIndex::new(n, s, points))
}

/// Permutation of `{1..n}`, stored by images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// `images[i - 1]` is the image of `i`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(invalid(format!("not a permutation: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Self {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n as u8).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(a - 1, b - 1);
        Self::new(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize - 1] = (i + 1) as u8;
        }
        Self { images: inv }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<u8> = (1..=n as u8).collect();
        images.shuffle(rng);
        Self { images }
    }
}

/// Elementwise image `gX`.
pub fn act(g: &Permutation, x: Subset) -> Subset {
    debug_assert_eq!(g.n(), x.n());
    let bits = x
        .members()
        .into_iter()
        .fold(0u32, |acc, m| acc | 1 << (g.image(m) - 1));
    Subset::from_bits(x.n(), bits)
}

/// Sizes of the distance spheres around `{1..s}` by exhaustive enumeration;
/// only nonempty spheres are listed.
pub fn orbit_sizes(n: usize, s: usize) -> Result<Vec<(usize, u64)>> {
    let level = enumerate_level(n, s)?;
    let base = *level.point(0);
    let mut counts = vec![0u64; s + 1];
    for p in level.points() {
        counts[pseudo_distance(*p, base)] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect())
}

/// `(S_n, P_s)` for all `s`, with levels built on demand.
#[derive(Debug)]
pub struct SubsetGeometry {
    n: usize,
    levels: LevelCache<Subset>,
}

impl SubsetGeometry {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_SUBSET_N {
            return Err(invalid(format!("n = {n} exceeds the bound {MAX_SUBSET_N}")));
        }
        Ok(Self {
            n,
            levels: LevelCache::new(n),
        })
    }
}

impl Geometry for SubsetGeometry {
    type Point = Subset;
    type GroupElement = Permutation;

    fn family(&self) -> Family {
        Family::Subset
    }

    fn n(&self) -> usize {
        self.n
    }

    fn q(&self) -> Option<QParameter> {
        None
    }

    fn level(&self, s: usize) -> Result<Arc<SubsetLevelIndex>> {
        if s > self.n {
            return Err(invalid(format!("s = {s} exceeds n = {}", self.n)));
        }
        self.levels.get_or_build(s, || enumerate_level(self.n, s))
    }

    fn level_size(&self, s: usize) -> ExactInteger {
        binomial(self.n as i64, s as i64)
    }

    fn q_integer(&self, m: usize) -> ExactInteger {
        m.into()
    }

    fn dim(&self, p: &Subset) -> usize {
        p.len()
    }

    fn contains(&self, big: &Subset, small: &Subset) -> bool {
        small.is_subset_of(*big)
    }

    fn intersection_dim(&self, a: &Subset, b: &Subset) -> usize {
        (a.bits & b.bits).count_ones() as usize
    }

    fn hyperplanes(&self, p: &Subset) -> Vec<Subset> {
        p.members()
            .into_iter()
            .map(|m| Subset::from_bits(self.n, p.bits & !(1 << (m - 1))))
            .collect()
    }

    fn complements(&self, p: &Subset) -> Vec<Subset> {
        vec![p.complement()]
    }

    fn is_complement(&self, a: &Subset, b: &Subset) -> bool {
        a.bits & b.bits == 0 && a.bits | b.bits == full_mask(self.n)
    }

    fn basepoint(&self, s: usize) -> Subset {
        Subset::from_bits(self.n, full_mask(s))
    }

    fn dual_basepoint(&self, s: usize) -> Subset {
        self.basepoint(s).complement()
    }

    fn act(&self, g: &Permutation, p: &Subset) -> Subset {
        act(g, *p)
    }

    fn random_group_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        Permutation::random(self.n, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(n: usize, m: &[usize]) -> Subset {
        Subset::from_members(n, m).unwrap()
    }

    #[test]
    fn enumerate_small_levels() {
        let l = enumerate_level(4, 2).unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.point(0).members(), vec![1, 2]);
        let l = enumerate_level(3, 0).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.point(0).is_empty());
        let l = enumerate_level(5, 5).unwrap();
        assert_eq!(l.points()[0].members(), vec![1, 2, 3, 4, 5]);
        assert!(enumerate_level(3, 4).is_err());
        assert!(enumerate_level(21, 1).is_err());
    }

    #[test]
    fn colex_order() {
        let l = enumerate_level(4, 2).unwrap();
        let order: Vec<_> = l.points().iter().map(|p| p.members()).collect();
        assert_eq!(
            order,
            vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn level_sizes_match_binomials() {
        for n in 0..=10 {
            for s in 0..=n {
                let l = enumerate_level(n, s).unwrap();
                assert_eq!(ExactInteger::from(l.len()), binomial(n as i64, s as i64));
                for (i, p) in l.iter() {
                    assert_eq!(l.rank(p), Some(i));
                    assert_eq!(p.len(), s);
                }
            }
        }
    }

    #[test]
    fn distances() {
        assert_eq!(distance(set(4, &[1, 2]), set(4, &[1, 3])).unwrap(), 1);
        assert_eq!(distance(set(4, &[1, 2]), set(4, &[1, 2])).unwrap(), 0);
        assert_eq!(distance(set(4, &[1, 2]), set(4, &[3, 4])).unwrap(), 2);
        assert!(distance(set(4, &[1]), set(4, &[1, 2])).is_err());
        assert_eq!(pseudo_distance(set(4, &[1]), set(4, &[1, 2, 3])), 0);
        assert_eq!(pseudo_distance(set(4, &[4]), set(4, &[1, 2, 3])), 1);
        assert_eq!(pseudo_distance(set(4, &[1, 4]), set(4, &[1, 2])), 1);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(set(4, &[1]).complement().members(), vec![2, 3, 4]);
        assert_eq!(set(3, &[]).complement().members(), vec![1, 2, 3]);
        // ℓ(Y, X0) = 1 and ℓ(C(X0), C(Y)) = 1 for Y = {1,4}, X0 = {1,2}
        let (y, x0) = (set(4, &[1, 4]), set(4, &[1, 2]));
        assert_eq!(pseudo_distance(y, x0), 1);
        assert_eq!(pseudo_distance(x0.complement(), y.complement()), 1);
    }

    #[test]
    fn action_examples() {
        let x = set(3, &[1, 3]);
        assert_eq!(act(&Permutation::identity(3), x), x);
        let swap = Permutation::transposition(3, 1, 2).unwrap();
        assert_eq!(act(&swap, x).members(), vec![2, 3]);
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn action_preserves_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let level = enumerate_level(6, 3).unwrap();
        for _ in 0..100 {
            let g = Permutation::random(6, &mut rng);
            let x = *level.points().choose(&mut rng).unwrap();
            let y = *level.points().choose(&mut rng).unwrap();
            assert_eq!(
                distance(act(&g, x), act(&g, y)).unwrap(),
                distance(x, y).unwrap()
            );
        }
    }

    #[test]
    fn action_preserves_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..5 {
                let g = Permutation::random(n, &mut rng);
                for s in 0..=n {
                    for z_size in 0..=s {
                        for x in enumerate_level(n, s).unwrap().points() {
                            for z in enumerate_level(n, z_size).unwrap().points() {
                                assert_eq!(
                                    z.is_subset_of(*x),
                                    act(&g, *z).is_subset_of(act(&g, *x))
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Permutation::random(7, &mut rng);
        let x = set(7, &[2, 5, 6]);
        assert_eq!(act(&g.inverse(), act(&g, x)), x);
    }

    #[test]
    fn orbit_size_examples() {
        assert_eq!(orbit_sizes(4, 2).unwrap(), vec![(0, 1), (1, 4), (2, 1)]);
        assert_eq!(orbit_sizes(3, 1).unwrap(), vec![(0, 1), (1, 2)]);
        assert_eq!(orbit_sizes(5, 5).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn orbit_sizes_match_closed_form() {
        for n in 0..=8usize {
            for s in 0..=n {
                let sizes = orbit_sizes(n, s).unwrap();
                assert_eq!(sizes.len(), s.min(n - s) + 1);
                for (i, c) in sizes {
                    let closed = binomial(s as i64, (s - i) as i64)
                        * binomial((n - s) as i64, i as i64);
                    assert_eq!(ExactInteger::from(c), closed);
                }
            }
        }
    }

    #[test]
    fn triangle_inequality() {
        for n in 0..=6 {
            for s in 0..=n {
                let l = enumerate_level(n, s).unwrap();
                for a in l.points() {
                    for b in l.points() {
                        for c in l.points() {
                            let ab = distance(*a, *b).unwrap();
                            let bc = distance(*b, *c).unwrap();
                            let ac = distance(*a, *c).unwrap();
                            assert!(ac <= ab + bc);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn complement_is_isometric_bijection() {
        for n in 0..=6 {
            for s in 0..=n {
                let l = enumerate_level(n, s).unwrap();
                let dual = enumerate_level(n, n - s).unwrap();
                let mut hit = vec![false; dual.len()];
                for a in l.points() {
                    let ca = a.complement();
                    assert_eq!(ca.complement(), *a);
                    hit[dual.rank(&ca).unwrap()] = true;
                    for b in l.points() {
                        assert_eq!(
                            distance(ca, b.complement()).unwrap(),
                            distance(*a, *b).unwrap()
                        );
                    }
                }
                assert!(hit.into_iter().all(|h| h));
            }
        }
    }

    #[test]
    fn serializes_as_sorted_list() {
        assert_eq!(serde_json::to_string(&set(5, &[4, 1, 3])).unwrap(), "[1,3,4]");
    }
}
