//! Exact spectral ground truth for one level: the filtration by pushed-up
//! kernels, its dimensions, the `M_1` eigenvalue on each piece and the
//! spherical function obtained by projecting a delta function.
//!
//! Component bases are integer vectors throughout (kernels are returned
//! primitive, and 0/1 incidence maps keep them integral), so Gram matrices
//! and incidence products run over `BigInt`.

pub mod linalg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::level::{Family, Geometry};
use crate::matrix::{ExactMatrix, LevelTag};
use crate::operators::{build_adjoint, build_averaging, build_complement_operator, build_radon, level_tag, ComplementDirection};
use crate::qcomb::{format_rational, ExactInteger, ExactRational};

/// A subspace of functions on one level, by a basis of coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    pub level: Option<LevelTag>,
    pub ambient: usize,
    pub vectors: Vec<Vec<ExactRational>>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    fn from_integer(level: Option<LevelTag>, ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        Self {
            level,
            ambient,
            vectors: vectors
                .iter()
                .map(|v| v.iter().cloned().map(BigRational::from_integer).collect())
                .collect(),
        }
    }
}

pub fn exact_kernel(m: &ExactMatrix) -> SubspaceBasis {
    SubspaceBasis {
        level: m.domain(),
        ambient: m.cols(),
        vectors: linalg::kernel(m),
    }
}

pub fn exact_rank(m: &ExactMatrix) -> usize {
    linalg::rank(m)
}

/// Column space of a matrix, as the list of its columns.
pub fn exact_image(m: &ExactMatrix) -> SubspaceBasis {
    SubspaceBasis {
        level: m.codomain(),
        ambient: m.rows(),
        vectors: (0..m.cols()).map(|j| m.column(j)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub operator: String,
    pub rank: usize,
    pub domain_dim: usize,
    pub injective: bool,
}

pub fn certify_injectivity(m: &ExactMatrix, operator: impl Into<String>) -> InjectivityVerdict {
    let rank = exact_rank(m);
    InjectivityVerdict {
        operator: operator.into(),
        rank,
        domain_dim: m.cols(),
        injective: rank == m.cols(),
    }
}

/// `M v = λ v` for every basis vector of `h`; the common `λ`.
pub fn eigenvalue_on_component(m: &ExactMatrix, h: &SubspaceBasis) -> Result<ExactRational> {
    let mut lambda: Option<ExactRational> = None;
    for v in &h.vectors {
        let mv = m.mul_vec(v);
        let i = v
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Inconsistency("zero vector in component basis".into()))?;
        let l = &mv[i] / &v[i];
        if mv.iter().zip(v).any(|(a, b)| *a != &l * b) {
            return Err(Error::Inconsistency("component is not an eigenspace".into()));
        }
        match &lambda {
            Some(prev) if *prev != l => {
                return Err(Error::Inconsistency("operator is not scalar on component".into()));
            }
            _ => lambda = Some(l),
        }
    }
    lambda.ok_or_else(|| Error::Inconsistency("empty component".into()))
}

/// 0/1 matrix as, per row, the list of columns holding a 1.
fn ones_by_row(m: &ExactMatrix) -> Vec<Vec<usize>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .filter(|&j| {
                    let x = m.get(i, j);
                    debug_assert!(x.is_zero() || x.is_one());
                    !x.is_zero()
                })
                .collect()
        })
        .collect()
}

fn apply_ones(adj: &[Vec<usize>], v: &[BigInt]) -> Vec<BigInt> {
    adj.iter()
        .map(|row| row.iter().fold(BigInt::zero(), |acc, &j| acc + &v[j]))
        .collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn integer_kernel(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    linalg::kernel(m)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// Which side of the complement duality a filtration lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Level `s`, built with `R` chains.
    Primal,
    /// Level `n - s`, built with `R^*` chains.
    Dual,
}

/// Basis of the `t`-th component at parameter `s`, as integer vectors on
/// level `s` (primal) or `n - s` (dual).
///
/// Primal: `H^t = R_{s-1} ⋯ R_t (Ker R_{t-1}^*)`, `H^0` the constants.
/// Dual: `R_{n-s}^* ⋯ R_{n-t-1}^* (Ker R_{n-t})`, the `t = 0` piece the
/// constants pushed down from the top level.
fn component_vectors<G: Geometry>(g: &G, s: usize, t: usize, side: Side) -> Result<Vec<Vec<BigInt>>> {
    let n = g.n();
    match side {
        Side::Primal => {
            let mut vs = if t == 0 {
                vec![vec![BigInt::one()]]
            } else {
                integer_kernel(&build_adjoint(&build_radon(g, t - 1)?))
            };
            for u in t..s {
                let adj = ones_by_row(&build_radon(g, u)?);
                vs = vs.iter().map(|v| apply_ones(&adj, v)).collect();
            }
            Ok(vs)
        }
        Side::Dual => {
            let mut vs = if t == 0 {
                vec![vec![BigInt::one()]]
            } else {
                integer_kernel(&build_radon(g, n - t)?)
            };
            for u in (n - s..n - t).rev() {
                let adj = ones_by_row(&build_adjoint(&build_radon(g, u)?));
                vs = vs.iter().map(|v| apply_ones(&adj, v)).collect();
            }
            Ok(vs)
        }
    }
}

/// Projects the delta at `base` onto the span of `vectors` (solving the
/// Gram system) and rescales to 1 at `base`.
fn project_delta(vectors: &[Vec<BigInt>], base: usize) -> Result<Vec<ExactRational>> {
    let m = vectors.len();
    let gram = ExactMatrix::from_fn(m, m, |i, j| BigRational::from_integer(dot(&vectors[i], &vectors[j])));
    let rhs: Vec<ExactRational> = vectors.iter().map(|v| BigRational::from_integer(v[base].clone())).collect();
    let c = linalg::solve(&gram, &rhs)?;
    let len = vectors[0].len();
    let mut p = vec![BigRational::zero(); len];
    for (ci, v) in c.iter().zip(vectors) {
        if ci.is_zero() {
            continue;
        }
        for (px, vx) in p.iter_mut().zip(v) {
            if !vx.is_zero() {
                *px += ci * BigRational::from_integer(vx.clone());
            }
        }
    }
    let at_base = p[base].clone();
    if at_base.is_zero() {
        return Err(Error::Inconsistency("projection vanishes at the basepoint".into()));
    }
    Ok(p.into_iter().map(|x| x / &at_base).collect())
}

/// Per-distance values of a function on a level, checking it is constant
/// on each sphere around the point of rank `base`.
pub fn radial_profile<G: Geometry>(g: &G, level: usize, base: usize, f: &[ExactRational]) -> Result<Vec<ExactRational>> {
    let idx = g.level(level)?;
    let center = idx.point(base);
    let radius = level.min(g.n() - level);
    let mut profile: Vec<Option<ExactRational>> = vec![None; radius + 1];
    for (i, p) in idx.iter() {
        let d = g.distance(center, p);
        match &profile[d] {
            None => profile[d] = Some(f[i].clone()),
            Some(v) if *v != f[i] => {
                return Err(Error::Inconsistency(format!(
                    "not radial: value at rank {i} differs on the sphere of radius {d}"
                )))
            }
            Some(_) => {}
        }
    }
    profile
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::Inconsistency("empty distance sphere".into())))
        .collect()
}

/// A spherical function as a full vector on its level and as a profile.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalFunction {
    pub values: Vec<ExactRational>,
    pub profile: Vec<ExactRational>,
}

fn check_parameters<G: Geometry>(g: &G, s: usize, t: usize) -> Result<()> {
    if 2 * s > g.n() || t > s {
        return Err(Error::InvalidParameters(format!(
            "need t <= s <= n/2; got n = {}, s = {s}, t = {t}",
            g.n()
        )));
    }
    Ok(())
}

fn level_and_base<G: Geometry>(g: &G, s: usize, side: Side) -> Result<(usize, usize)> {
    Ok(match side {
        Side::Primal => {
            let base = g.level(s)?.rank(&g.basepoint(s)).expect("basepoint in level");
            (s, base)
        }
        Side::Dual => {
            let level = g.n() - s;
            let base = g.level(level)?.rank(&g.dual_basepoint(s)).expect("basepoint in level");
            (level, base)
        }
    })
}

fn spherical_from_vectors<G: Geometry>(g: &G, s: usize, side: Side, vectors: &[Vec<BigInt>]) -> Result<SphericalFunction> {
    let (level, base) = level_and_base(g, s, side)?;
    let values = project_delta(vectors, base)?;
    let profile = radial_profile(g, level, base, &values)?;
    Ok(SphericalFunction { values, profile })
}

/// Oracle spherical function of `H^t` on level `s`: the projection of the
/// delta at the basepoint, normalized to 1 there, checked radial.
pub fn spherical_from_projector<G: Geometry>(g: &G, s: usize, t: usize) -> Result<SphericalFunction> {
    check_parameters(g, s, t)?;
    spherical_from_vectors(g, s, Side::Primal, &component_vectors(g, s, t, Side::Primal)?)
}

/// Same on level `n - s` for the dual component, around the dual basepoint.
pub fn dual_spherical_from_projector<G: Geometry>(g: &G, s: usize, t: usize) -> Result<SphericalFunction> {
    check_parameters(g, s, t)?;
    spherical_from_vectors(g, s, Side::Dual, &component_vectors(g, s, t, Side::Dual)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub t: usize,
    pub dimension: usize,
    pub expected_dimension: String,
    pub eigenvalue: String,
    pub spherical: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub family: Family,
    pub n: usize,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    pub side: Side,
    pub level: usize,
    pub level_size: usize,
    pub components: Vec<ComponentReport>,
    pub injectivity: Vec<InjectivityVerdict>,
    pub orthogonal: bool,
    pub complete: bool,
    pub eigenvalues_distinct: bool,
}

impl DecompositionReport {
    pub fn dimensions(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dimension).collect()
    }
}

/// Everything computed for one level: report plus exact data.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub report: DecompositionReport,
    pub components: Vec<SubspaceBasis>,
    pub eigenvalues: Vec<ExactRational>,
    pub spherical: Vec<SphericalFunction>,
}

fn expected_dimension<G: Geometry>(g: &G, t: usize) -> ExactInteger {
    let below = if t == 0 { ExactInteger::zero() } else { g.level_size(t - 1) };
    g.level_size(t) - below
}

/// Filtration of level `s <= n/2` by `H^0 ⊥ H^1 ⊥ ⋯ ⊥ H^s`, with every
/// structural claim checked exactly. Errors with `Inconsistency` if any of
/// them fails.
pub fn decompose_level<G: Geometry>(g: &G, s: usize) -> Result<Decomposition> {
    decompose(g, s, Side::Primal)
}

/// Mirror filtration of level `n - s` for `s <= n/2`.
pub fn decompose_dual_level<G: Geometry>(g: &G, s: usize) -> Result<Decomposition> {
    decompose(g, s, Side::Dual)
}

fn injectivity_verdicts<G: Geometry>(g: &G, s: usize, side: Side) -> Result<Vec<InjectivityVerdict>> {
    let n = g.n();
    let mut out = Vec::new();
    match side {
        Side::Primal => {
            for u in 0..s {
                out.push(certify_injectivity(&build_radon(g, u)?, format!("R_{u}")));
            }
        }
        Side::Dual => {
            for u in (n - s..n).rev() {
                out.push(certify_injectivity(&build_adjoint(&build_radon(g, u)?), format!("R*_{u}")));
            }
        }
    }
    Ok(out)
}

fn decompose<G: Geometry>(g: &G, s: usize, side: Side) -> Result<Decomposition> {
    check_parameters(g, s, 0)?;
    let n = g.n();
    let (level, base) = level_and_base(g, s, side)?;
    let size = g.level(level)?.len();
    let tag = level_tag(g, level);

    let injectivity = injectivity_verdicts(g, s, side)?;
    if let Some(bad) = injectivity.iter().find(|v| !v.injective) {
        return Err(Error::Inconsistency(format!(
            "{} is not injective: rank {} < {}",
            bad.operator, bad.rank, bad.domain_dim
        )));
    }

    let parts: Vec<Vec<Vec<BigInt>>> = (0..=s).map(|t| component_vectors(g, s, t, side)).collect::<Result<_>>()?;

    for (t, vs) in parts.iter().enumerate() {
        let expected = expected_dimension(g, t);
        if ExactInteger::from(vs.len()) != expected {
            return Err(Error::Inconsistency(format!(
                "component {t} has dimension {} but {expected} was expected",
                vs.len()
            )));
        }
    }
    for a in 0..parts.len() {
        for b in a + 1..parts.len() {
            for u in &parts[a] {
                for v in &parts[b] {
                    if !dot(u, v).is_zero() {
                        return Err(Error::Inconsistency(format!("components {a} and {b} are not orthogonal")));
                    }
                }
            }
        }
    }
    let all: Vec<Vec<ExactRational>> = parts
        .iter()
        .flatten()
        .map(|v| v.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    if all.len() != size || linalg::rank_of_vectors(size, &all) != size {
        return Err(Error::Inconsistency("components do not span the level".into()));
    }

    let m1 = if level.min(n - level) >= 1 {
        Some(ones_by_row(&build_averaging(g, level, 1)?))
    } else {
        None
    };
    let mut eigenvalues = Vec::new();
    let mut spherical = Vec::new();
    for (t, vs) in parts.iter().enumerate() {
        let lambda = match &m1 {
            Some(adj) => integer_eigenvalue(adj, vs).map_err(|e| match e {
                Error::Inconsistency(msg) => Error::Inconsistency(format!("component {t}: {msg}")),
                other => other,
            })?,
            None => BigRational::zero(),
        };
        eigenvalues.push(lambda);
        let values = project_delta(vs, base)?;
        let profile = radial_profile(g, level, base, &values)?;
        spherical.push(SphericalFunction { values, profile });
    }
    let eigenvalues_distinct = {
        let mut sorted = eigenvalues.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == eigenvalues.len()
    };
    if !eigenvalues_distinct && m1.is_some() {
        return Err(Error::Inconsistency("repeated M1 eigenvalue across components".into()));
    }

    let components: Vec<SubspaceBasis> = parts
        .iter()
        .map(|vs| SubspaceBasis::from_integer(Some(tag), size, vs))
        .collect();
    let report = DecompositionReport {
        family: g.family(),
        n,
        s,
        q: g.q().map(|q| q.value()),
        side,
        level,
        level_size: size,
        components: parts
            .iter()
            .enumerate()
            .map(|(t, vs)| ComponentReport {
                t,
                dimension: vs.len(),
                expected_dimension: expected_dimension(g, t).to_string(),
                eigenvalue: format_rational(&eigenvalues[t]),
                spherical: spherical[t].profile.iter().map(format_rational).collect(),
            })
            .collect(),
        injectivity,
        orthogonal: true,
        complete: true,
        eigenvalues_distinct,
    };
    Ok(Decomposition {
        report,
        components,
        eigenvalues,
        spherical,
    })
}

fn integer_eigenvalue(adj: &[Vec<usize>], vectors: &[Vec<BigInt>]) -> Result<ExactRational> {
    let mut lambda: Option<ExactRational> = None;
    for v in vectors {
        let mv = apply_ones(adj, v);
        let i = v
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Inconsistency("zero basis vector".into()))?;
        let l = BigRational::new(mv[i].clone(), v[i].clone());
        // mv = l v  <=>  mv * den = num * v
        if mv.iter().zip(v).any(|(a, b)| a * l.denom() != l.numer() * b) {
            return Err(Error::Inconsistency("not an eigenspace of M1".into()));
        }
        match &lambda {
            Some(prev) if *prev != l => return Err(Error::Inconsistency("M1 not scalar".into())),
            _ => lambda = Some(l),
        }
    }
    lambda.ok_or_else(|| Error::Inconsistency("empty component".into()))
}

/// `Im R_{s-1} ⊥ Ker R_{s-1}^*` on level `s`, with complementary dimensions.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub s: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub level_size: usize,
    pub orthogonal: bool,
}

impl SplittingReport {
    pub fn holds(&self) -> bool {
        self.orthogonal && self.image_dim + self.kernel_dim == self.level_size
    }
}

pub fn verify_splitting<G: Geometry>(g: &G, s: usize) -> Result<SplittingReport> {
    if s == 0 || s > g.n() {
        return Err(Error::InvalidParameters(format!("splitting needs 1 <= s <= n; s = {s}")));
    }
    let r = build_radon(g, s - 1)?;
    let ker = integer_kernel(&build_adjoint(&r));
    let cols: Vec<Vec<BigInt>> = (0..r.cols())
        .map(|j| r.column(j).into_iter().map(|x| x.to_integer()).collect())
        .collect();
    let orthogonal = ker.iter().all(|k| cols.iter().all(|c| dot(k, c).is_zero()));
    Ok(SplittingReport {
        s,
        image_dim: exact_rank(&r),
        kernel_dim: ker.len(),
        level_size: r.rows(),
        orthogonal,
    })
}

/// Whether `C_s^*` carries the top dual kernel `Ker R_{n-s}` onto the top
/// primal kernel `Ker R_{s-1}^*` (equality of spans). Needs `1 <= s <= n/2`.
pub fn kernel_correspondence<G: Geometry>(g: &G, s: usize) -> Result<bool> {
    check_parameters(g, s, 0)?;
    if s == 0 {
        return Err(Error::InvalidParameters("kernel correspondence needs s >= 1".into()));
    }
    let c = build_complement_operator(g, s, ComplementDirection::Down)?;
    let source = linalg::kernel(&build_radon(g, g.n() - s)?);
    let image: Vec<Vec<ExactRational>> = source.iter().map(|v| c.mul_vec(v)).collect();
    let target = linalg::kernel(&build_adjoint(&build_radon(g, s - 1)?));
    Ok(linalg::same_span(c.rows(), &image, &target))
}

/// `(C_s^* φ_s)(W_0)`, where `φ_s` is the projector-derived spherical
/// function of the top dual component (`Ker R_{n-s}` on level `n - s`).
pub fn complement_pairing<G: Geometry>(g: &G, s: usize) -> Result<ExactRational> {
    check_parameters(g, s, s)?;
    let phi = spherical_from_vectors(g, s, Side::Dual, &component_vectors(g, s, s, Side::Dual)?)?;
    let c = build_complement_operator(g, s, ComplementDirection::Down)?;
    let base = g.level(s)?.rank(&g.basepoint(s)).expect("basepoint in level");
    Ok(c.mul_vec(&phi.values).swap_remove(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::{int, rational, QParameter};
    use crate::subset::SubsetGeometry;
    use crate::subspace::SubspaceGeometry;

    fn subsets(n: usize) -> SubsetGeometry {
        SubsetGeometry::new(n).unwrap()
    }

    fn subspaces(n: usize, q: u32) -> SubspaceGeometry {
        SubspaceGeometry::new(n, QParameter::new(q).unwrap()).unwrap()
    }

    fn ones(n: usize) -> ExactMatrix {
        ExactMatrix::from_fn(1, n, |_, _| int(1))
    }

    #[test]
    fn kernels_and_ranks() {
        assert_eq!(exact_kernel(&ExactMatrix::identity(3)).dim(), 0);
        assert_eq!(exact_kernel(&ones(5)).dim(), 4);
        assert_eq!(exact_rank(&build_radon(&subsets(4), 1).unwrap()), 4);
    }

    #[test]
    fn decomposition_dimensions() {
        let d = decompose_level(&subsets(6), 3).unwrap();
        assert_eq!(d.report.dimensions(), vec![1, 5, 9, 5]);
        assert_eq!(decompose_level(&subsets(4), 1).unwrap().report.dimensions(), vec![1, 3]);
        let d = decompose_level(&subspaces(4, 2), 2).unwrap();
        assert_eq!(d.report.dimensions(), vec![1, 14, 20]);
        assert!(decompose_level(&subsets(4), 3).is_err());
    }

    #[test]
    fn dual_decomposition_dimensions() {
        let d = decompose_dual_level(&subsets(4), 1).unwrap();
        assert_eq!((d.report.level, d.report.dimensions()), (3, vec![1, 3]));
        assert_eq!(decompose_dual_level(&subsets(5), 2).unwrap().report.dimensions(), vec![1, 4, 5]);
        let d = decompose_dual_level(&subspaces(3, 2), 1).unwrap();
        assert_eq!((d.report.level, d.report.dimensions()), (2, vec![1, 6]));
    }

    #[test]
    fn eigenvalues_at_s_one() {
        for n in 2..=7 {
            let d = decompose_level(&subsets(n), 1).unwrap();
            assert_eq!(d.eigenvalues, vec![int(n as i64 - 1), int(-1)]);
        }
        let d = decompose_level(&subsets(6), 3).unwrap();
        assert_eq!(d.eigenvalues[3], int(-3));
    }

    #[test]
    fn eigenvalue_on_basis() {
        let g = subsets(5);
        let m1 = build_averaging(&g, 2, 1).unwrap();
        let d = decompose_level(&g, 2).unwrap();
        for (h, l) in d.components.iter().zip(&d.eigenvalues) {
            assert_eq!(&eigenvalue_on_component(&m1, h).unwrap(), l);
            assert_eq!(eigenvalue_on_component(&build_averaging(&g, 2, 0).unwrap(), h).unwrap(), int(1));
        }
        // a non-invariant span is rejected
        let mixed = SubspaceBasis {
            level: None,
            ambient: 10,
            vectors: vec![(0..10).map(|i| int(i as i64)).collect()],
        };
        assert!(eigenvalue_on_component(&m1, &mixed).is_err());
    }

    #[test]
    fn projector_spherical_functions() {
        for n in 2..=6 {
            let phi = spherical_from_projector(&subsets(n), 1, 1).unwrap();
            assert_eq!(phi.profile, vec![int(1), rational(-1, n as i64 - 1)]);
            assert!(spherical_from_projector(&subsets(n), 1, 0).unwrap().profile.iter().all(|x| *x == int(1)));
        }
        let phi = spherical_from_projector(&subspaces(3, 2), 1, 1).unwrap();
        assert_eq!(phi.profile, vec![int(1), rational(-1, 6)]);
        let phi = dual_spherical_from_projector(&subsets(4), 1, 1).unwrap();
        assert_eq!(phi.profile, vec![int(1), rational(-1, 3)]);
        let phi = dual_spherical_from_projector(&subspaces(3, 2), 1, 1).unwrap();
        assert_eq!(phi.profile, vec![int(1), rational(-1, 6)]);
    }

    #[test]
    fn splittings() {
        for s in 1..=5 {
            assert!(verify_splitting(&subsets(5), s).unwrap().holds());
        }
        let r = verify_splitting(&subspaces(3, 2), 2).unwrap();
        assert_eq!((r.image_dim, r.kernel_dim), (7, 0));
    }

    #[test]
    fn complement_kernels_correspond() {
        for s in 1..=2 {
            assert!(kernel_correspondence(&subsets(4), s).unwrap());
        }
        assert!(kernel_correspondence(&subspaces(2, 2), 1).unwrap());
    }

    #[test]
    fn pairing_at_s_one() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            assert_eq!(complement_pairing(&subspaces(n, q), 1).unwrap(), rational(1, q as i64));
        }
        let c = build_complement_operator(&subspaces(3, 2), 1, ComplementDirection::Down).unwrap();
        assert!(certify_injectivity(&c, "C_1*").injective);
    }

    #[test]
    fn report_serializes_rationals_as_strings() {
        let d = decompose_level(&subsets(4), 1).unwrap();
        let json = serde_json::to_string(&d.report).unwrap();
        assert!(json.contains("\"spherical\":[\"1/1\",\"-1/3\"]"), "{json}");
        assert!(!json.contains("\"q\""));
    }
}
