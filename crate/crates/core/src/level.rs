//! Indexed lattice levels and the geometry interface shared by the subset
//! and subspace families.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcomb::{ExactInteger, QParameter};

/// Frozen enumeration of one level: points in a fixed order and the inverse
/// map back to ranks. Rank 0 is always the level's basepoint.
#[derive(Debug)]
pub struct LevelIndex<P> {
    n: usize,
    s: usize,
    points: Vec<P>,
    ranks: HashMap<P, usize>,
}

impl<P: Clone + Eq + Hash> LevelIndex<P> {
    pub fn new(n: usize, s: usize, points: Vec<P>) -> Self {
        let ranks = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect::<HashMap<_, _>>();
        assert_eq!(ranks.len(), points.len(), "duplicate points in level");
        Self {
            n,
            s,
            points,
            ranks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, rank: usize) -> &P {
        &self.points[rank]
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn rank(&self, p: &P) -> Option<usize> {
        self.ranks.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &P)> {
        self.points.iter().enumerate()
    }
}

/// Lazily built levels `0..=n`, each built at most once.
#[derive(Debug)]
pub(crate) struct LevelCache<P> {
    slots: Vec<OnceLock<Arc<LevelIndex<P>>>>,
}

impl<P> LevelCache<P> {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            slots: (0..=n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub(crate) fn get_or_build(
        &self,
        s: usize,
        build: impl FnOnce() -> Result<LevelIndex<P>>,
    ) -> Result<Arc<LevelIndex<P>>> {
        if let Some(level) = self.slots[s].get() {
            return Ok(level.clone());
        }
        let level = Arc::new(build()?);
        Ok(self.slots[s].get_or_init(|| level).clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Subset,
    Subspace,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Subset => "subset",
            Family::Subspace => "subspace",
        })
    }
}

/// What the operator and spectral code needs from a homogeneous lattice:
/// levels, incidence, the invariant distance, complements and the group
/// action. Implemented by the subset lattice under `S_n` and the subspace
/// lattice under `GL_n(q)`.
pub trait Geometry: Send + Sync {
    type Point: Clone + Eq + Hash + Debug + Send + Sync;
    type GroupElement: Clone + Debug + Send + Sync;

    fn family(&self) -> Family;
    fn n(&self) -> usize;
    /// Field size for the subspace family.
    fn q(&self) -> Option<QParameter>;

    fn level(&self, s: usize) -> Result<Arc<LevelIndex<Self::Point>>>;
    /// Closed-form level size, `C(n,s)` resp. the Gaussian binomial.
    fn level_size(&self, s: usize) -> ExactInteger;
    /// The `q`-integer `(m)_q`, or `m` for subsets.
    fn q_integer(&self, m: usize) -> ExactInteger;

    fn dim(&self, p: &Self::Point) -> usize;
    /// `small ⊂ big` resp. `small < big`.
    fn contains(&self, big: &Self::Point, small: &Self::Point) -> bool;
    fn intersection_dim(&self, a: &Self::Point, b: &Self::Point) -> usize;
    /// Pseudo-distance `dim y - dim(y ∩ x)`.
    fn pseudo_distance(&self, y: &Self::Point, x: &Self::Point) -> usize {
        self.dim(y) - self.intersection_dim(y, x)
    }
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> usize {
        debug_assert_eq!(self.dim(a), self.dim(b));
        self.pseudo_distance(a, b)
    }
    /// Sub-objects of codimension one.
    fn hyperplanes(&self, p: &Self::Point) -> Vec<Self::Point>;
    /// All `b` with `a ⊕ b` the whole space (for subsets, only `N - a`).
    fn complements(&self, p: &Self::Point) -> Vec<Self::Point>;
    fn is_complement(&self, a: &Self::Point, b: &Self::Point) -> bool;

    /// `{1..s}` resp. `<e_1..e_s>`.
    fn basepoint(&self, s: usize) -> Self::Point;
    /// `{s+1..n}` resp. `<e_{s+1}..e_n>`, a point of level `n - s`.
    fn dual_basepoint(&self, s: usize) -> Self::Point;

    fn act(&self, g: &Self::GroupElement, p: &Self::Point) -> Self::Point;
    fn random_group_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::GroupElement;
}
