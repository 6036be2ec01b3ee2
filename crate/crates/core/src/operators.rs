//! Intertwining operators between levels, as exact matrices, and the
//! operator identities relating them.
//!
//! Every matrix maps functions on its column level to functions on its row
//! level. The pairing is the counting inner product `⟨f,h⟩ = Σ f(x)h(x)`,
//! under which adjoints are plain transposes.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::level::Geometry;
use crate::matrix::{ExactMatrix, LevelTag};
use crate::qcomb::{format_rational, q_power, ExactRational};
use crate::subset::SubsetGeometry;
use crate::subspace::SubspaceGeometry;

pub fn level_tag<G: Geometry>(g: &G, s: usize) -> LevelTag {
    LevelTag {
        family: g.family(),
        n: g.n(),
        s,
        q: g.q().map(|q| q.value()),
    }
}

/// Radon transform `R_s: L²(level s) → L²(level s+1)`,
/// `R_s f(X) = Σ_{Z ⊂ X} f(Z)`.
pub fn build_radon<G: Geometry>(g: &G, s: usize) -> Result<ExactMatrix> {
    if s >= g.n() {
        return Err(invalid(format!("R_s needs s < n, got s = {s}, n = {}", g.n())));
    }
    let lower = g.level(s)?;
    let upper = g.level(s + 1)?;
    let mut m = ExactMatrix::zeros(upper.len(), lower.len());
    for (i, x) in upper.iter() {
        for z in g.hyperplanes(x) {
            let j = lower.rank(&z).expect("hyperplane missing from its level");
            m.set(i, j, BigRational::one());
        }
    }
    Ok(m.with_levels(level_tag(g, s), level_tag(g, s + 1)))
}

/// `R_s^*`, the transpose of `R_s`:
/// `R_s^* f(Z) = Σ_{Z ⊂ X} f(X)`.
pub fn build_adjoint(r: &ExactMatrix) -> ExactMatrix {
    r.transpose()
}

/// Averaging operator `M_k f(X) = Σ_{d(X,X')=k} f(X')` on level `s`.
pub fn build_averaging<G: Geometry>(g: &G, s: usize, k: usize) -> Result<ExactMatrix> {
    if s > g.n() || k > s.min(g.n() - s) {
        return Err(invalid(format!(
            "M_k needs k <= min(s, n-s); got k = {k}, s = {s}, n = {}",
            g.n()
        )));
    }
    let level = g.level(s)?;
    let m = ExactMatrix::from_fn(level.len(), level.len(), |i, j| {
        if g.distance(level.point(i), level.point(j)) == k {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    Ok(m.with_levels(level_tag(g, s), level_tag(g, s)))
}

/// Which of the two complement operators to build at parameter `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplementDirection {
    /// `C_s^*: L²(level n-s) → L²(level s)`.
    Down,
    /// `C_{n-s}^*: L²(level s) → L²(level n-s)`.
    Up,
}

/// Complement operator: sums a function over all complements of the
/// argument. For subsets the only complement is `N - X`, so this is
/// precomposition with complementation. Requires `2s <= n`.
pub fn build_complement_operator<G: Geometry>(
    g: &G,
    s: usize,
    direction: ComplementDirection,
) -> Result<ExactMatrix> {
    let n = g.n();
    if 2 * s > n {
        return Err(invalid(format!("complement operators need 2s <= n; s = {s}, n = {n}")));
    }
    let (row_s, col_s) = match direction {
        ComplementDirection::Down => (s, n - s),
        ComplementDirection::Up => (n - s, s),
    };
    let rows = g.level(row_s)?;
    let cols = g.level(col_s)?;
    let mut m = ExactMatrix::zeros(rows.len(), cols.len());
    for (i, w) in rows.iter() {
        for c in g.complements(w) {
            let j = cols.rank(&c).expect("complement missing from its level");
            m.set(i, j, BigRational::one());
        }
    }
    Ok(m.with_levels(level_tag(g, col_s), level_tag(g, row_s)))
}

/// `C_s^*` resp. `C_{n-s}^*` for subsets: permutation matrices of `X ↦ N - X`.
pub fn build_subset_complement_operator(
    g: &SubsetGeometry,
    s: usize,
    direction: ComplementDirection,
) -> Result<ExactMatrix> {
    build_complement_operator(g, s, direction)
}

/// `C(q)_s^*` resp. `C(q)_{n-s}^*`: entry `(W, W')` is 1 iff `W' ⊕ W = V`.
pub fn build_q_complement_operator(
    g: &SubspaceGeometry,
    s: usize,
    direction: ComplementDirection,
) -> Result<ExactMatrix> {
    build_complement_operator(g, s, direction)
}

/// Outcome of comparing both sides of an operator identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// `lhs = ratio · rhs`, when the two sides are proportional.
    pub ratio: Option<String>,
    /// First differing entry `(row, col)`.
    pub witness: Option<(usize, usize)>,
}

impl IdentityCheck {
    fn compare(name: impl Into<String>, lhs: &ExactMatrix, rhs: &ExactMatrix) -> Self {
        let witness = lhs.first_difference(rhs);
        Self {
            name: name.into(),
            holds: witness.is_none(),
            ratio: lhs.scalar_ratio(rhs).map(|r| format_rational(&r)),
            witness,
        }
    }
}

/// `R_s^* R_s = (n-s)_q Id + M_1` on level `s`, both sides computed.
/// Returns the check and the coefficient used (`n - s` for subsets).
pub fn verify_composition_identity<G: Geometry>(g: &G, s: usize) -> Result<IdentityCheck> {
    let r = build_radon(g, s)?;
    let lhs = &build_adjoint(&r) * &r;
    let size = g.level(s)?.len();
    let coeff = BigRational::from_integer(g.q_integer(g.n() - s));
    let mut rhs = ExactMatrix::identity(size).scale(&coeff);
    if s.min(g.n() - s) >= 1 {
        rhs = &rhs + &build_averaging(g, s, 1)?;
    }
    Ok(IdentityCheck::compare(
        format!("R*R = {} Id + M1 (s={s})", format_rational(&coeff)),
        &lhs,
        &rhs,
    ))
}

/// Scalar relating the two sides of the complement/Radon commutation:
/// `q^{(n-s)-(s-1)}` for subspaces, 1 for subsets.
pub fn commutation_scalar<G: Geometry>(g: &G, s: usize) -> ExactRational {
    let exponent = (g.n() as i64 - s as i64) - (s as i64 - 1);
    match g.q() {
        Some(q) => q_power(q.value().into(), exponent),
        None => BigRational::one(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub n: usize,
    pub s: usize,
    pub scalar: String,
    /// `C_s^* ∘ R_{n-s}^* = c · R_{s-1} ∘ C_{s-1}^*`.
    pub complement_radon: IdentityCheck,
    /// `C_{n-s}^* ∘ R_{s-1} = c · R_{n-s}^* ∘ C_{n-(s-1)}^*`, as printed.
    pub dual_stated: IdentityCheck,
    /// The transpose of the printed orientation:
    /// `R_{s-1}^* ∘ C_s^* = c · C_{s-1}^* ∘ R_{n-s}`.
    pub dual_transposed: IdentityCheck,
    /// `(C_{n-s}^* C_s^*) R_{n-s}^* = R_{n-s}^* (C_{n-(s-1)}^* C_{s-1}^*)`.
    pub square_upper: IdentityCheck,
    /// `R_{s-1} (C_{s-1}^* C_{n-(s-1)}^*) = (C_s^* C_{n-s}^*) R_{s-1}`.
    pub square_lower: IdentityCheck,
}

/// Checks the commutation relations between complement and Radon
/// operators at `1 <= s <= n/2`, all as exact matrices.
pub fn verify_commutation<G: Geometry>(g: &G, s: usize) -> Result<CommutationReport> {
    let n = g.n();
    if s == 0 || 2 * s > n {
        return Err(invalid(format!("commutation needs 1 <= s <= n/2; s = {s}, n = {n}")));
    }
    use ComplementDirection::{Down, Up};
    let c = commutation_scalar(g, s);
    let c_down_s = build_complement_operator(g, s, Down)?;
    let c_up_s = build_complement_operator(g, s, Up)?;
    let c_down_prev = build_complement_operator(g, s - 1, Down)?;
    let c_up_prev = build_complement_operator(g, s - 1, Up)?;
    let r_prev = build_radon(g, s - 1)?; // level s-1 → s
    let r_top = build_radon(g, n - s)?; // level n-s → n-s+1
    let r_top_adj = build_adjoint(&r_top);
    let r_prev_adj = build_adjoint(&r_prev);

    let complement_radon = IdentityCheck::compare(
        "C_s* R_{n-s}* = c R_{s-1} C_{s-1}*",
        &(&c_down_s * &r_top_adj),
        &(&r_prev * &c_down_prev).scale(&c),
    );
    let dual_stated = IdentityCheck::compare(
        "C_{n-s}* R_{s-1} = c R_{n-s}* C_{n-s+1}*",
        &(&c_up_s * &r_prev),
        &(&r_top_adj * &c_up_prev).scale(&c),
    );
    let dual_transposed = IdentityCheck::compare(
        "R_{s-1}* C_s* = c C_{s-1}* R_{n-s}",
        &(&r_prev_adj * &c_down_s),
        &(&c_down_prev * &r_top).scale(&c),
    );
    let square_upper = IdentityCheck::compare(
        "(C_{n-s}* C_s*) R_{n-s}* = R_{n-s}* (C_{n-s+1}* C_{s-1}*)",
        &(&(&c_up_s * &c_down_s) * &r_top_adj),
        &(&r_top_adj * &(&c_up_prev * &c_down_prev)),
    );
    let square_lower = IdentityCheck::compare(
        "R_{s-1} (C_{s-1}* C_{n-s+1}*) = (C_s* C_{n-s}*) R_{s-1}",
        &(&r_prev * &(&c_down_prev * &c_up_prev)),
        &(&(&c_down_s * &c_up_s) * &r_prev),
    );
    Ok(CommutationReport {
        n,
        s,
        scalar: format_rational(&c),
        complement_radon,
        dual_stated,
        dual_transposed,
        square_upper,
        square_lower,
    })
}

/// Permutation of a level induced by a group element: `perm[i]` is the
/// rank of `g · point(i)`.
pub fn level_permutation<G: Geometry>(g: &G, s: usize, elem: &G::GroupElement) -> Result<Vec<usize>> {
    let level = g.level(s)?;
    Ok(level
        .points()
        .iter()
        .map(|p| level.rank(&g.act(elem, p)).expect("action leaves the level"))
        .collect())
}

/// Permutation matrix of `τ_g`, `(τ_g f)(x) = f(g^{-1} x)`: entry
/// `(g·x, x)` is 1.
pub fn translation_matrix(perm: &[usize]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(perm.len(), perm.len());
    for (x, &gx) in perm.iter().enumerate() {
        m.set(gx, x, BigRational::one());
    }
    m
}

/// `T ∘ τ_g = τ_g ∘ T` for an operator from level `dom` to level `cod`.
/// Equivalent to `T[g·x, g·y] = T[x, y]` for all `x, y`; returns the first
/// violating `(x, y)`.
pub fn check_intertwining(
    t: &ExactMatrix,
    dom_perm: &[usize],
    cod_perm: &[usize],
) -> Option<(usize, usize)> {
    assert_eq!((t.rows(), t.cols()), (cod_perm.len(), dom_perm.len()));
    for x in 0..t.rows() {
        for y in 0..t.cols() {
            if t.get(cod_perm[x], dom_perm[y]) != t.get(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// `⟨R f, h⟩` and `⟨f, R^* h⟩` for given vectors.
pub fn adjoint_pairing(r: &ExactMatrix, f: &[ExactRational], h: &[ExactRational]) -> (ExactRational, ExactRational) {
    let lhs = crate::matrix::inner(&r.mul_vec(f), h);
    let rhs = crate::matrix::inner(f, &build_adjoint(r).mul_vec(h));
    (lhs, rhs)
}

/// Row sums of a 0/1 operator, all equal to `expected`?
pub fn constant_row_sums(m: &ExactMatrix, expected: &ExactRational) -> bool {
    m.row_sums().iter().all(|x| x == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::{int, QParameter};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn subsets(n: usize) -> SubsetGeometry {
        SubsetGeometry::new(n).unwrap()
    }

    fn subspaces(n: usize, q: u32) -> SubspaceGeometry {
        SubspaceGeometry::new(n, QParameter::new(q).unwrap()).unwrap()
    }

    fn all_equal(v: &[ExactRational], x: i64) -> bool {
        v.iter().all(|y| *y == int(x))
    }

    #[test]
    fn radon_examples() {
        let r0 = build_radon(&subsets(2), 0).unwrap();
        assert_eq!((r0.rows(), r0.cols()), (2, 1));
        assert!(all_equal(&r0.row_sums(), 1));
        let r1 = build_radon(&subsets(4), 1).unwrap();
        assert!(all_equal(&r1.row_sums(), 2));
        let rq = build_radon(&subspaces(2, 2), 0).unwrap();
        assert_eq!((rq.rows(), rq.cols()), (3, 1));
        assert!(all_equal(&rq.row_sums(), 1));
        assert!(build_radon(&subsets(3), 3).is_err());
    }

    #[test]
    fn radon_row_sums_are_q_integers() {
        let g = subspaces(4, 3);
        for s in 0..4 {
            let r = build_radon(&g, s).unwrap();
            let expected = BigRational::from_integer(g.q_integer(s + 1));
            assert!(constant_row_sums(&r, &expected));
        }
    }

    #[test]
    fn adjoint_examples() {
        let r0 = build_radon(&subsets(2), 0).unwrap();
        let a = build_adjoint(&r0);
        assert_eq!((a.rows(), a.cols()), (1, 2));
        assert_eq!(build_adjoint(&a), r0);
        let r = build_radon(&subsets(5), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f: Vec<_> = (0..r.cols()).map(|_| int(rng.gen_range(-5..6))).collect();
            let h: Vec<_> = (0..r.rows()).map(|_| int(rng.gen_range(-5..6))).collect();
            let (lhs, rhs) = adjoint_pairing(&r, &f, &h);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn averaging_examples() {
        let g = subsets(4);
        assert_eq!(build_averaging(&g, 2, 0).unwrap().same_entries(&ExactMatrix::identity(6)), true);
        let m1 = build_averaging(&g, 2, 1).unwrap();
        assert!(m1.is_symmetric());
        assert!(all_equal(&m1.row_sums(), 4));
        let mq = build_averaging(&subspaces(4, 2), 2, 1).unwrap();
        assert!(all_equal(&mq.row_sums(), 18));
        assert!(build_averaging(&g, 2, 3).is_err());
    }

    #[test]
    fn averaging_operators_commute() {
        for g in [subsets(6)] {
            for s in 0..=3 {
                let ms: Vec<_> = (0..=s.min(6 - s)).map(|k| build_averaging(&g, s, k).unwrap()).collect();
                for a in &ms {
                    for b in &ms {
                        assert_eq!(&(a * b), &(b * a));
                    }
                }
            }
        }
        let g = subspaces(4, 2);
        let ms: Vec<_> = (0..=2).map(|k| build_averaging(&g, 2, k).unwrap()).collect();
        for a in &ms {
            for b in &ms {
                assert!((a * b).same_entries(&(b * a)));
            }
        }
    }

    #[test]
    fn composition_identity_examples() {
        assert!(verify_composition_identity(&subsets(4), 1).unwrap().holds);
        assert!(verify_composition_identity(&subsets(5), 0).unwrap().holds);
        let check = verify_composition_identity(&subspaces(3, 2), 1).unwrap();
        assert!(check.holds, "{check:?}");
        assert!(check.name.contains("3/1"));
    }

    #[test]
    fn composition_fails_with_wrong_coefficient() {
        // the classical coefficient n - s is wrong for subspaces
        let g = subspaces(3, 2);
        let r = build_radon(&g, 1).unwrap();
        let lhs = &build_adjoint(&r) * &r;
        let rhs = &ExactMatrix::identity(7).scale(&int(2)) + &build_averaging(&g, 1, 1).unwrap();
        assert!(lhs.first_difference(&rhs).is_some());
    }

    #[test]
    fn subset_complement_operator() {
        let g = subsets(2);
        let c = build_subset_complement_operator(&g, 1, ComplementDirection::Down).unwrap();
        // (C_1^* f)({1}) = f({2}); level 1 is [{1}, {2}]
        assert_eq!(*c.get(0, 1), int(1));
        assert_eq!(*c.get(0, 0), int(0));
        for n in 0..=6 {
            let g = subsets(n);
            for s in 0..=n / 2 {
                let down = build_subset_complement_operator(&g, s, ComplementDirection::Down).unwrap();
                let up = build_subset_complement_operator(&g, s, ComplementDirection::Up).unwrap();
                let size = g.level(s).unwrap().len();
                assert!((&down * &up).same_entries(&ExactMatrix::identity(size)));
                assert!((&down * &down.transpose()).same_entries(&ExactMatrix::identity(size)));
            }
        }
        assert!(build_subset_complement_operator(&subsets(4), 3, ComplementDirection::Down).is_err());
    }

    #[test]
    fn q_complement_operator_examples() {
        let g = subspaces(2, 2);
        let c = build_q_complement_operator(&g, 1, ComplementDirection::Down).unwrap();
        assert_eq!((c.rows(), c.cols()), (3, 3));
        assert_eq!(c.row(0).iter().filter(|x| !x.is_zero()).count(), 2);
        assert!(c.get(0, 0).is_zero());
        let c = build_q_complement_operator(&subspaces(4, 2), 2, ComplementDirection::Down).unwrap();
        assert!(all_equal(&c.row_sums(), 16));
    }

    #[test]
    fn q_complement_intertwines() {
        let g = subspaces(3, 2);
        let c = build_q_complement_operator(&g, 1, ComplementDirection::Down).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let elem = g.random_group_element(&mut rng);
            let dom = level_permutation(&g, 2, &elem).unwrap();
            let cod = level_permutation(&g, 1, &elem).unwrap();
            assert_eq!(check_intertwining(&c, &dom, &cod), None);
            // same statement as a product of matrices
            let lhs = &c * &translation_matrix(&dom);
            let rhs = &translation_matrix(&cod) * &c;
            assert!(lhs.same_entries(&rhs));
        }
    }

    #[test]
    fn intertwining_detects_non_invariant_operator() {
        let g = subsets(4);
        let mut t = build_radon(&g, 1).unwrap();
        t.set(0, 0, int(2));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let found = (0..25).any(|_| {
            let elem = g.random_group_element(&mut rng);
            let dom = level_permutation(&g, 1, &elem).unwrap();
            let cod = level_permutation(&g, 2, &elem).unwrap();
            check_intertwining(&t, &dom, &cod).is_some()
        });
        assert!(found);
    }

    #[test]
    fn commutation_examples() {
        for (n, s, q, scalar) in [(2, 1, 2, "2/1"), (4, 2, 2, "2/1"), (3, 1, 3, "9/1")] {
            let report = verify_commutation(&subspaces(n, q), s).unwrap();
            assert_eq!(report.scalar, scalar);
            assert!(report.complement_radon.holds, "{report:?}");
            assert!(report.dual_stated.holds, "{report:?}");
            assert!(report.dual_transposed.holds, "{report:?}");
        }
    }

    #[test]
    fn commuting_squares_carry_squared_scalar() {
        let report = verify_commutation(&subspaces(2, 2), 1).unwrap();
        assert!(!report.square_upper.holds);
        assert_eq!(report.square_upper.ratio.as_deref(), Some("4/1"));
        assert_eq!(report.square_lower.ratio.as_deref(), Some("1/4"));
        // scalar 1 for subsets, so the squares commute there
        let report = verify_commutation(&subsets(5), 2).unwrap();
        assert!(report.square_upper.holds && report.square_lower.holds);
        assert!(report.complement_radon.holds && report.dual_stated.holds);
    }
}
