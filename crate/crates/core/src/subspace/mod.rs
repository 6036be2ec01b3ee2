//! The Grassmann geometry: subspaces of `F_q^n` under `GL_n(q)`.
//!
//! A subspace is stored by its reduced row echelon basis, which is unique,
//! so structural equality is subspace equality.

mod field;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use field::{FieldElement, FiniteField, MAX_FIELD_SIZE};

use crate::error::{invalid, Error, Result};
use crate::level::{Family, Geometry, LevelCache, LevelIndex};
use crate::qcomb::{gaussian_binomial, q_int, ExactInteger, QParameter};

/// Default ceiling on the number of points in one enumerated level.
pub const DEFAULT_LEVEL_CEILING: u64 = 5000;

/// Subspace of `F_q^n` in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: u8,
    pivots: Vec<u8>,
    /// `dim × n` entries, row-major.
    rows: Vec<FieldElement>,
}

pub type SubspaceLevelIndex = LevelIndex<Subspace>;

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            n: n as u8,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// `<e_i : i in coords>` with 1-based coordinates.
    pub fn coordinate(n: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let mut cols: Vec<usize> = coords.into_iter().map(|c| c - 1).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut rows = vec![0; cols.len() * n];
        for (i, &c) in cols.iter().enumerate() {
            rows[i * n + c] = 1;
        }
        Self {
            n: n as u8,
            pivots: cols.into_iter().map(|c| c as u8).collect(),
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot columns, 0-based and strictly increasing.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().map(|&p| p as usize)
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.rows[i * self.n()..(i + 1) * self.n()]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.rows.chunks(self.n().max(1)).take(self.dim())
    }

    /// Membership of a vector in the row space: reduce against the echelon
    /// basis and test for zero.
    pub fn contains_vector(&self, field: &FiniteField, v: &[FieldElement]) -> bool {
        let mut r = v.to_vec();
        for (i, p) in self.pivots().enumerate() {
            let c = r[p];
            if c != 0 {
                for (x, &b) in r.iter_mut().zip(self.row(i)) {
                    *x = field.sub(*x, field.mul(c, b));
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, field: &FiniteField, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.rows().all(|r| self.contains_vector(field, r))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u8]> = self.rows().collect();
        write!(f, "<{rows:?}>")
    }
}

/// A subspace together with the field size, in the interchange format
/// `{"n":..,"s":..,"q":..,"rows":[[..],..]}`.
pub struct SubspaceRecord<'a> {
    pub subspace: &'a Subspace,
    pub q: QParameter,
}

impl Serialize for SubspaceRecord<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[u8]> = self.subspace.rows().collect();
        let mut st = serializer.serialize_struct("Subspace", 4)?;
        st.serialize_field("n", &self.subspace.n())?;
        st.serialize_field("s", &self.subspace.dim())?;
        st.serialize_field("q", &self.q.value())?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// Reduces `rows` (each of length `n`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot columns.
fn rref(field: &FiniteField, rows: &mut Vec<Vec<FieldElement>>, n: usize) -> Vec<u8> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &b) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, b));
            }
        }
        pivots.push(c as u8);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Canonical (RREF) form of the row space of `rows`.
pub fn canonicalize<R: AsRef<[FieldElement]>>(field: &FiniteField, n: usize, rows: &[R]) -> Subspace {
    let mut work: Vec<Vec<u8>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    debug_assert!(work.iter().all(|r| r.len() == n));
    let pivots = rref(field, &mut work, n);
    Subspace {
        n: n as u8,
        pivots,
        rows: work.into_iter().flatten().collect(),
    }
}

/// Rank of a list of vectors.
pub fn rank<R: AsRef<[FieldElement]>>(field: &FiniteField, n: usize, rows: &[R]) -> usize {
    canonicalize(field, n, rows).dim()
}

pub fn sum(field: &FiniteField, u: &Subspace, w: &Subspace) -> Subspace {
    let rows: Vec<&[u8]> = u.rows().chain(w.rows()).collect();
    canonicalize(field, u.n(), &rows)
}

/// `dim(U ∩ W) = dim U + dim W - dim(U + W)`.
pub fn intersection_dim(field: &FiniteField, u: &Subspace, w: &Subspace) -> usize {
    u.dim() + w.dim() - sum(field, u, w).dim()
}

/// `ℓ_q(U, W) = dim U - dim(U ∩ W)`.
pub fn q_pseudo_distance(field: &FiniteField, u: &Subspace, w: &Subspace) -> usize {
    u.dim() - intersection_dim(field, u, w)
}

/// `d_q(W, W') = dim W - dim(W ∩ W')`; dimensions must agree.
pub fn q_distance(field: &FiniteField, w: &Subspace, w2: &Subspace) -> Result<usize> {
    if w.dim() != w2.dim() || w.n() != w2.n() {
        return Err(Error::DimensionMismatch(format!(
            "d_q needs equal dimensions, got {} and {}",
            w.dim(),
            w2.dim()
        )));
    }
    Ok(q_pseudo_distance(field, w, w2))
}

/// `W2 ⊕ W = V`.
pub fn is_complement(field: &FiniteField, w2: &Subspace, w: &Subspace) -> bool {
    w2.dim() + w.dim() == w.n() && sum(field, w2, w).dim() == w.n()
}

/// All complements of `w`, as graphs `{c + φ(c)}` of linear maps
/// `φ: C → W` over the coordinate complement `C` spanned by the non-pivot
/// unit vectors. Exactly `q^{s(n-s)}` subspaces, ordered by the matrix of
/// `φ` read as base-`q` digits.
pub fn enumerate_complements(field: &FiniteField, w: &Subspace) -> Vec<Subspace> {
    let n = w.n();
    let s = w.dim();
    let free_cols: Vec<usize> = (0..n).filter(|c| !w.pivots.contains(&(*c as u8))).collect();
    let q = field.size();
    let coeff_count = s * free_cols.len();
    let total = q.pow(coeff_count as u32);
    let mut out = Vec::with_capacity(total);
    let mut coeffs = vec![0u8; coeff_count];
    for code in 0..total {
        let mut c = code;
        for slot in coeffs.iter_mut().rev() {
            *slot = (c % q) as u8;
            c /= q;
        }
        let rows: Vec<Vec<u8>> = free_cols
            .iter()
            .enumerate()
            .map(|(i, &col)| {
                let mut v = vec![0u8; n];
                v[col] = 1;
                for k in 0..s {
                    let a = coeffs[i * s + k];
                    if a != 0 {
                        for (x, &b) in v.iter_mut().zip(w.row(k)) {
                            *x = field.add(*x, field.mul(a, b));
                        }
                    }
                }
                v
            })
            .collect();
        out.push(canonicalize(field, n, &rows));
    }
    out
}

/// Histogram of the complements of `W_0 = <e_1..e_s>` by their distance to
/// `W_0' = <e_{s+1}..e_n>`, for `j = 0..=min(s, n-s)`.
pub fn complements_by_distance(field: &FiniteField, n: usize, s: usize) -> Result<Vec<(usize, u64)>> {
    if s > n {
        return Err(invalid(format!("s = {s} exceeds n = {n}")));
    }
    let w0 = Subspace::coordinate(n, 1..=s);
    let w0_dual = Subspace::coordinate(n, s + 1..=n);
    let mut counts = vec![0u64; s.min(n - s) + 1];
    for c in enumerate_complements(field, &w0) {
        counts[q_distance(field, &c, &w0_dual)?] += 1;
    }
    Ok(counts.into_iter().enumerate().collect())
}

/// All `s`-dimensional subspaces of `F_q^n`, ordered by pivot pattern
/// (colex) and then by free entries read row-major as base-`q` digits.
/// Rank 0 is `<e_1..e_s>`.
pub fn enumerate_level(field: &FiniteField, n: usize, s: usize, ceiling: u64) -> Result<SubspaceLevelIndex> {
    if s > n {
        return Err(invalid(format!("s = {s} exceeds n = {n}")));
    }
    let expected = gaussian_binomial(n as i64, s as i64, field.q());
    let points_u64: u64 = (&expected).try_into().unwrap_or(u64::MAX);
    if points_u64 > ceiling {
        return Err(Error::LevelTooLarge {
            points: points_u64,
            ceiling,
        });
    }
    let q = field.size();
    let mut points = Vec::with_capacity(points_u64 as usize);
    for pattern in crate::subset::enumerate_level(n, s)?.points() {
        let pivots: Vec<usize> = pattern.members().into_iter().map(|m| m - 1).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                let pivots = &pivots;
                (p + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![0u8; s * n];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i * n + p] = 1;
            }
            let mut c = code;
            for &(i, col) in free.iter().rev() {
                rows[i * n + col] = (c % q) as u8;
                c /= q;
            }
            points.push(Subspace {
                n: n as u8,
                pivots: pivots.iter().map(|&p| p as u8).collect(),
                rows,
            });
        }
    }
    debug_assert_eq!(ExactInteger::from(points.len()), expected);
    debug_assert!(s == 0 || points[0] == Subspace::coordinate(n, 1..=s));
    Ok(LevelIndex::new(n, s, points))
}

/// Element of `GL_n(q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InvertibleMatrix {
    n: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for InvertibleMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u8]> = self.entries.chunks(self.n.max(1)).collect();
        write!(f, "{rows:?}")
    }
}

impl InvertibleMatrix {
    /// Row-major `n × n` entries; singular matrices are rejected.
    pub fn new(field: &FiniteField, n: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != n * n || entries.iter().any(|&x| x as usize >= field.size()) {
            return Err(invalid("matrix entries do not form an n×n matrix over F_q"));
        }
        let rows: Vec<&[u8]> = entries.chunks(n.max(1)).collect();
        if n > 0 && rank(field, n, &rows) != n {
            return Err(Error::Singular);
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn random<R: Rng + ?Sized>(field: &FiniteField, n: usize, rng: &mut R) -> Self {
        loop {
            let entries = (0..n * n).map(|_| rng.gen_range(0..field.size()) as u8).collect();
            if let Ok(g) = Self::new(field, n, entries) {
                return g;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `g v` for a column vector `v`.
    pub fn apply(&self, field: &FiniteField, v: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.n)
            .map(|i| {
                self.entries[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }
}

/// `gW`, canonicalized.
pub fn act(field: &FiniteField, g: &InvertibleMatrix, w: &Subspace) -> Subspace {
    let images: Vec<Vec<u8>> = w.rows().map(|r| g.apply(field, r)).collect();
    canonicalize(field, w.n(), &images)
}

/// `(GL_n(q), V_s)` for all `s`, with levels built on demand.
#[derive(Debug)]
pub struct SubspaceGeometry {
    n: usize,
    field: Arc<FiniteField>,
    ceiling: u64,
    levels: LevelCache<Subspace>,
}

impl SubspaceGeometry {
    pub fn new(n: usize, q: QParameter) -> Result<Self> {
        Ok(Self::with_field(n, Arc::new(FiniteField::new(q)?), DEFAULT_LEVEL_CEILING))
    }

    pub fn with_field(n: usize, field: Arc<FiniteField>, ceiling: u64) -> Self {
        Self {
            n,
            field,
            ceiling,
            levels: LevelCache::new(n),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
}

impl Geometry for SubspaceGeometry {
    type Point = Subspace;
    type GroupElement = InvertibleMatrix;

    fn family(&self) -> Family {
        Family::Subspace
    }

    fn n(&self) -> usize {
        self.n
    }

    fn q(&self) -> Option<QParameter> {
        Some(self.field.q())
    }

    fn level(&self, s: usize) -> Result<Arc<SubspaceLevelIndex>> {
        if s > self.n {
            return Err(invalid(format!("s = {s} exceeds n = {}", self.n)));
        }
        self.levels
            .get_or_build(s, || enumerate_level(&self.field, self.n, s, self.ceiling))
    }

    fn level_size(&self, s: usize) -> ExactInteger {
        gaussian_binomial(self.n as i64, s as i64, self.field.q())
    }

    fn q_integer(&self, m: usize) -> ExactInteger {
        q_int(m as u32, self.field.q())
    }

    fn dim(&self, p: &Subspace) -> usize {
        p.dim()
    }

    fn contains(&self, big: &Subspace, small: &Subspace) -> bool {
        big.contains(&self.field, small)
    }

    fn intersection_dim(&self, a: &Subspace, b: &Subspace) -> usize {
        intersection_dim(&self.field, a, b)
    }

    /// Kernels of the functionals `Σ c_i x_i` on `p`'s basis coordinates,
    /// one per projective point `c`.
    fn hyperplanes(&self, p: &Subspace) -> Vec<Subspace> {
        let f = &*self.field;
        let d = p.dim();
        let n = p.n();
        let q = f.size();
        let mut out = Vec::new();
        for lead in 0..d {
            let tail = d - lead - 1;
            for code in 0..q.pow(tail as u32) {
                let mut c = vec![0u8; d];
                c[lead] = 1;
                let mut k = code;
                for slot in c[lead + 1..].iter_mut().rev() {
                    *slot = (k % q) as u8;
                    k /= q;
                }
                // e_i - c_i e_lead spans ker(c) in coefficient space
                let rows: Vec<Vec<u8>> = (0..d)
                    .filter(|&i| i != lead)
                    .map(|i| {
                        let m = f.neg(c[i]);
                        p.row(i)
                            .iter()
                            .zip(p.row(lead))
                            .map(|(&a, &b)| f.add(a, f.mul(m, b)))
                            .collect()
                    })
                    .collect();
                out.push(canonicalize(f, n, &rows));
            }
        }
        out
    }

    fn complements(&self, p: &Subspace) -> Vec<Subspace> {
        enumerate_complements(&self.field, p)
    }

    fn is_complement(&self, a: &Subspace, b: &Subspace) -> bool {
        is_complement(&self.field, a, b)
    }

    fn basepoint(&self, s: usize) -> Subspace {
        Subspace::coordinate(self.n, 1..=s)
    }

    fn dual_basepoint(&self, s: usize) -> Subspace {
        Subspace::coordinate(self.n, s + 1..=self.n)
    }

    fn act(&self, g: &InvertibleMatrix, p: &Subspace) -> Subspace {
        act(&self.field, g, p)
    }

    fn random_group_element<R: Rng + ?Sized>(&self, rng: &mut R) -> InvertibleMatrix {
        InvertibleMatrix::random(&self.field, self.n, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::{int_pow, QParameter};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> FiniteField {
        FiniteField::new(QParameter::new(q).unwrap()).unwrap()
    }

    fn level(f: &FiniteField, n: usize, s: usize) -> SubspaceLevelIndex {
        enumerate_level(f, n, s, DEFAULT_LEVEL_CEILING).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let f2 = field(2);
        let full = canonicalize(&f2, 2, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(full.rows().collect::<Vec<_>>(), vec![&[1, 0][..], &[0, 1][..]]);
        let f3 = field(3);
        let line = canonicalize(&f3, 2, &[vec![2, 2]]);
        assert_eq!(line.rows().collect::<Vec<_>>(), vec![&[1, 1][..]]);
        let zero = canonicalize::<Vec<u8>>(&f3, 3, &[]);
        assert_eq!(zero.dim(), 0);
        let zero = canonicalize(&f3, 3, &[vec![0, 0, 0]]);
        assert_eq!(zero.dim(), 0);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let q = *[2u32, 3].choose(&mut rng).unwrap();
            let f = field(q);
            let n = rng.gen_range(1..=5);
            let k = rng.gen_range(0..=n + 1);
            let rows: Vec<Vec<u8>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(0..q) as u8).collect())
                .collect();
            let once = canonicalize(&f, n, &rows);
            let rows2: Vec<&[u8]> = once.rows().collect();
            assert_eq!(canonicalize(&f, n, &rows2), once);
        }
    }

    #[test]
    fn canonical_form_is_unique_over_spanning_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = field(3);
        let target = canonicalize(&f, 5, &[vec![1, 2, 0, 1, 1], vec![0, 1, 1, 2, 0]]);
        for _ in 0..1000 {
            // random combinations of the basis plus redundant rows
            let k = rng.gen_range(2..=4);
            let rows: Vec<Vec<u8>> = (0..k)
                .map(|_| {
                    let (a, b) = (rng.gen_range(0..3u8), rng.gen_range(0..3u8));
                    target
                        .row(0)
                        .iter()
                        .zip(target.row(1))
                        .map(|(&x, &y)| f.add(f.mul(a, x), f.mul(b, y)))
                        .collect()
                })
                .collect();
            let c = canonicalize(&f, 5, &rows);
            if c.dim() == 2 {
                assert_eq!(c, target);
            } else {
                assert!(target.contains(&f, &c));
            }
        }
    }

    #[test]
    fn enumerate_lines_of_f2_squared() {
        let f = field(2);
        let l = level(&f, 2, 1);
        let rows: Vec<Vec<u8>> = l.points().iter().map(|p| p.row(0).to_vec()).collect();
        assert_eq!(rows, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(level(&f, 4, 2).len(), 35);
        assert_eq!(level(&f, 5, 0).len(), 1);
    }

    #[test]
    fn level_sizes_match_gaussian_binomials() {
        for q in [2u32, 3, 4] {
            let f = field(q);
            let max_n = if q == 2 { 5 } else { 4 };
            for n in 0..=max_n {
                for s in 0..=n {
                    let l = level(&f, n, s);
                    assert_eq!(
                        ExactInteger::from(l.len()),
                        gaussian_binomial(n as i64, s as i64, f.q()),
                        "n={n} s={s} q={q}"
                    );
                    if s > 0 {
                        assert_eq!(*l.point(0), Subspace::coordinate(n, 1..=s));
                    }
                }
            }
        }
    }

    #[test]
    fn level_ceiling_enforced() {
        let f = field(2);
        assert!(matches!(
            enumerate_level(&f, 6, 3, 100),
            Err(Error::LevelTooLarge { .. })
        ));
    }

    #[test]
    fn intersection_dims() {
        let f = field(2);
        let e1 = Subspace::coordinate(3, [1]);
        let e2 = Subspace::coordinate(3, [2]);
        assert_eq!(intersection_dim(&f, &e1, &e2), 0);
        assert_eq!(intersection_dim(&f, &e1, &e1), 1);
        let l = level(&f, 4, 2);
        for u in l.points() {
            for w in l.points() {
                let i = intersection_dim(&f, u, w);
                assert_eq!(u.dim() + w.dim(), sum(&f, u, w).dim() + i);
                assert!(i <= 2);
            }
        }
    }

    #[test]
    fn q_distance_examples() {
        let f = field(2);
        let a = canonicalize(&f, 2, &[vec![1, 0]]);
        let b = canonicalize(&f, 2, &[vec![1, 1]]);
        assert_eq!(q_distance(&f, &a, &a).unwrap(), 0);
        assert_eq!(q_distance(&f, &a, &b).unwrap(), 1);
        assert!(q_distance(&f, &a, &Subspace::coordinate(2, [1, 2])).is_err());
    }

    #[test]
    fn distance_classes_on_planes_of_f2_4() {
        let f = field(2);
        let l = level(&f, 4, 2);
        let mut hist = [0usize; 3];
        for a in l.points() {
            for b in l.points() {
                hist[q_distance(&f, a, b).unwrap()] += 1;
            }
        }
        // 35 planes; each has 18 neighbours at distance 1 and 16 at distance 2
        assert_eq!(hist, [35, 35 * 18, 35 * 16]);
        // sampled group elements never mix classes
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let g = InvertibleMatrix::random(&f, 4, &mut rng);
            for a in l.points().iter().take(7) {
                for b in l.points() {
                    assert_eq!(
                        q_distance(&f, &act(&f, &g, a), &act(&f, &g, b)).unwrap(),
                        q_distance(&f, a, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn complement_examples() {
        let f = field(2);
        assert!(is_complement(&f, &Subspace::coordinate(2, [2]), &Subspace::coordinate(2, [1])));
        let w0 = Subspace::coordinate(4, [1, 2]);
        assert_eq!(enumerate_complements(&f, &w0).len(), 16);
        // every candidate of dimension 2 is checked directly
        let by_filter = level(&f, 4, 2)
            .points()
            .iter()
            .filter(|w| is_complement(&f, w, &w0))
            .count();
        assert_eq!(by_filter, 16);
        let f3 = field(3);
        assert_eq!(enumerate_complements(&f3, &Subspace::coordinate(2, [1])).len(), 3);
    }

    #[test]
    fn complement_counts_everywhere() {
        for q in [2u32, 3] {
            let f = field(q);
            for n in 0..=4 {
                for s in 0..=n {
                    let dual = level(&f, n, n - s);
                    for w in level(&f, n, s).points() {
                        let comps = enumerate_complements(&f, w);
                        assert_eq!(
                            ExactInteger::from(comps.len()),
                            int_pow(q.into(), (s * (n - s)) as u32)
                        );
                        let filtered = dual.points().iter().filter(|c| is_complement(&f, c, w)).count();
                        assert_eq!(filtered, comps.len());
                        assert!(comps.iter().all(|c| is_complement(&f, c, w)));
                    }
                }
            }
        }
    }

    #[test]
    fn complements_by_distance_examples() {
        let f = field(2);
        assert_eq!(complements_by_distance(&f, 2, 1).unwrap(), vec![(0, 1), (1, 1)]);
        assert_eq!(
            complements_by_distance(&f, 4, 2).unwrap(),
            vec![(0, 1), (1, 9), (2, 6)]
        );
    }

    #[test]
    fn action_examples() {
        let f = field(2);
        let e1 = Subspace::coordinate(2, [1]);
        assert_eq!(act(&f, &InvertibleMatrix::identity(2), &e1), e1);
        let swap = InvertibleMatrix::new(&f, 2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(act(&f, &swap, &e1), Subspace::coordinate(2, [2]));
        assert!(matches!(
            InvertibleMatrix::new(&f, 2, vec![1, 1, 1, 1]),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn action_preserves_distance_exhaustively() {
        let f = field(2);
        let l = level(&f, 4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let g = InvertibleMatrix::random(&f, 4, &mut rng);
            let images: Vec<_> = l.points().iter().map(|w| act(&f, &g, w)).collect();
            for (a, ga) in l.points().iter().zip(&images) {
                assert_eq!(ga.dim(), a.dim());
                for (b, gb) in l.points().iter().zip(&images) {
                    assert_eq!(q_distance(&f, ga, gb).unwrap(), q_distance(&f, a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn hyperplane_counts() {
        for q in [2u32, 3, 4] {
            let g = SubspaceGeometry::new(4, QParameter::new(q).unwrap()).unwrap();
            for s in 1..=3 {
                for p in g.level(s).unwrap().points() {
                    let hs = g.hyperplanes(p);
                    assert_eq!(ExactInteger::from(hs.len()), q_int(s as u32, g.field().q()));
                    for h in &hs {
                        assert_eq!(h.dim(), s - 1);
                        assert!(p.contains(g.field(), h));
                    }
                    let mut dedup = hs.clone();
                    dedup.sort();
                    dedup.dedup();
                    assert_eq!(dedup.len(), hs.len());
                }
            }
        }
    }

    #[test]
    fn serializes_with_header() {
        let w = Subspace::coordinate(2, [1]);
        let rec = SubspaceRecord {
            subspace: &w,
            q: QParameter::new(2).unwrap(),
        };
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"n":2,"s":1,"q":2,"rows":[[1,0]]}"#
        );
    }
}
