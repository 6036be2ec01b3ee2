//! Fraction-free elimination over the integers.
//!
//! Rows are first cleared of denominators, then reduced with Bareiss'
//! one-step rule so every intermediate entry is a minor of the input and
//! each division is exact. Rationals only reappear in back substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::qcomb::primitive_integer_vector;

/// Row echelon form with the pivot column of each nonzero row.
pub(crate) struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss forward elimination. Pivot: first nonzero entry of the column
/// among the remaining rows.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(found) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, found);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = pivot * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v -= &lead * &pivot_row[j];
                }
                if !prev.is_one() {
                    debug_assert!(v.is_multiple_of(&prev), "inexact Bareiss step");
                    v /= &prev;
                }
                row[j] = v;
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        cols,
    }
}

pub fn rank(m: &ExactMatrix) -> usize {
    bareiss(m.integer_rows(), m.cols()).rank()
}

/// Null-space basis: one vector per free column `f`, with a 1 at `f` and 0
/// at the other free columns, scaled to a primitive integer vector. The
/// free columns depend only on the column matroid, so the basis does not
/// depend on row order.
pub fn kernel(m: &ExactMatrix) -> Vec<Vec<BigRational>> {
    let ech = bareiss(m.integer_rows(), m.cols());
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols()];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    (0..m.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![BigRational::zero(); m.cols()];
            x[f] = BigRational::one();
            back_substitute(&ech, &mut x);
            primitive_integer_vector(&x)
                .into_iter()
                .map(BigRational::from_integer)
                .collect()
        })
        .collect()
}

/// Fills the pivot coordinates of `x` so that the echelon rows annihilate
/// it, given the non-pivot coordinates. The right-hand side is zero.
fn back_substitute(ech: &Echelon, x: &mut [BigRational]) {
    for (i, &p) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[i];
        let mut acc = BigRational::zero();
        for j in p + 1..ech.cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc += &x[j] * BigRational::from_integer(row[j].clone());
            }
        }
        x[p] = -acc / BigRational::from_integer(row[p].clone());
    }
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve(a: &ExactMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch("solve needs a square system".into()));
    }
    let augmented = ExactMatrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let ech = bareiss(augmented.integer_rows(), n + 1);
    if ech.rank() < n || ech.pivots.iter().any(|&p| p >= n) {
        return Err(Error::Singular);
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let row = &ech.rows[i];
        let mut acc = BigRational::from_integer(row[n].clone());
        for j in i + 1..n {
            if !row[j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(row[j].clone());
            }
        }
        x[i] = acc / BigRational::from_integer(row[i].clone());
    }
    Ok(x)
}

/// Rank of a list of vectors.
pub fn rank_of_vectors(len: usize, vectors: &[Vec<BigRational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&ExactMatrix::from_fn(vectors.len(), len, |i, j| vectors[i][j].clone()))
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(len: usize, a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> bool {
    let ra = rank_of_vectors(len, a);
    let rb = rank_of_vectors(len, b);
    if ra != rb {
        return false;
    }
    let both: Vec<Vec<BigRational>> = a.iter().chain(b).cloned().collect();
    rank_of_vectors(len, &both) == ra
}
