//! Dense exact matrices between indexed levels.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::Family;
use crate::qcomb::{format_rational, parse_rational, ExactRational};

/// Which level of which lattice a matrix side is indexed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelTag {
    pub family: Family,
    pub n: usize,
    pub s: usize,
    pub q: Option<u32>,
}

/// Row-major dense matrix of exact rationals. Rows are indexed by the
/// codomain level, columns by the domain level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactRational>,
    domain: Option<LevelTag>,
    codomain: Option<LevelTag>,
}

/// JSON interchange shape: `{"rows":r,"cols":c,"entries":[["p/q",..],..]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
            domain: None,
            codomain: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data,
            domain: None,
            codomain: None,
        }
    }

    pub fn from_rows(rows: Vec<Vec<ExactRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            domain: None,
            codomain: None,
        })
    }

    /// Columns of the result are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<ExactRational>]) -> Self {
        Self::from_fn(len, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn with_levels(mut self, domain: LevelTag, codomain: LevelTag) -> Self {
        self.domain = Some(domain);
        self.codomain = Some(codomain);
        self
    }

    pub fn domain(&self) -> Option<LevelTag> {
        self.domain
    }

    pub fn codomain(&self) -> Option<LevelTag> {
        self.codomain
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExactRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone());
        t.domain = self.codomain;
        t.codomain = self.domain;
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        let mut m = self.clone();
        for x in &mut m.data {
            *x *= k;
        }
        m
    }

    /// Entries equal except for the attached level tags.
    pub fn same_entries(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }

    /// Exact product; zero entries of the left factor are skipped, which
    /// keeps 0/1 incidence products cheap.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let unit = a.is_one();
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * rhs.cols + j];
                    if unit {
                        *slot += b;
                    } else {
                        *slot += a * b;
                    }
                }
            }
        }
        out.domain = rhs.domain;
        out.codomain = self.codomain;
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[ExactRational]) -> Vec<ExactRational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn row_sums(&self) -> Vec<ExactRational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(BigRational::zero(), |acc, x| acc + x))
            .collect()
    }

    /// Positions of the first differing entry, if any.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((self.rows.min(other.rows), self.cols.min(other.cols)));
        }
        (0..self.data.len())
            .find(|&k| self.data[k] != other.data[k])
            .map(|k| (k / self.cols, k % self.cols))
    }

    /// If `self = λ·other` for a single rational `λ`, returns `λ`. Two zero
    /// matrices give `Some(1)`.
    pub fn scalar_ratio(&self, other: &Self) -> Option<ExactRational> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let mut ratio: Option<ExactRational> = None;
        for (a, b) in self.data.iter().zip(&other.data) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let r = a / b;
                    match &ratio {
                        Some(prev) if *prev != r => return None,
                        Some(_) => {}
                        None => ratio = Some(r),
                    }
                }
                _ => return None,
            }
        }
        Some(ratio.unwrap_or_else(BigRational::one))
    }

    /// Integer entries scaled row by row so that each row is integral.
    pub(crate) fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(format_rational).collect())
                .collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MatrixJson = serde_json::from_str(s)?;
        if doc.entries.len() != doc.rows || doc.entries.iter().any(|r| r.len() != doc.cols) {
            return Err(Error::Parse("entries do not match the declared shape".into()));
        }
        let rows = doc
            .entries
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::from_rows(rows)?;
        m.rows = doc.rows;
        m.cols = doc.cols;
        if m.data.is_empty() {
            m.data = vec![BigRational::zero(); doc.rows * doc.cols];
        }
        Ok(m)
    }

    /// MatrixMarket-style coordinate listing of the nonzero entries, 1-based,
    /// values as `num/den`.
    pub fn to_matrix_market(&self) -> String {
        let nonzero: Vec<(usize, &ExactRational)> =
            self.data.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let mut out = String::from("%%MatrixMarket matrix coordinate rational general\n");
        let _ = writeln!(out, "{} {} {}", self.rows, self.cols, nonzero.len());
        for (k, x) in nonzero {
            let _ = writeln!(out, "{} {} {}", k / self.cols + 1, k % self.cols + 1, format_rational(x));
        }
        out
    }

    pub fn from_matrix_market(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("matrix market: {msg}"));
        let mut lines = s.lines().filter(|l| !l.starts_with('%') && !l.trim().is_empty());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing size line"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad size line")))
            .collect::<Result<_>>()?;
        let [rows, cols, nnz] = header[..] else {
            return Err(bad("size line needs three fields"));
        };
        let mut m = Self::zeros(rows, cols);
        let mut seen = 0;
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [i, j, v] = parts[..] else {
                return Err(bad("entry needs three fields"));
            };
            let i: usize = i.parse().map_err(|_| bad("bad row"))?;
            let j: usize = j.parse().map_err(|_| bad("bad column"))?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(bad("index out of range"));
            }
            m.set(i - 1, j - 1, parse_rational(v)?);
            seen += 1;
        }
        if seen != nnz {
            return Err(bad("entry count mismatch"));
        }
        Ok(m)
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x += y;
        }
        out
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x -= y;
        }
        out
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("shape mismatch")
    }
}

/// Counting inner product `Σ f(x) h(x)`.
pub fn inner(f: &[ExactRational], h: &[ExactRational]) -> ExactRational {
    f.iter()
        .zip(h)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::{int, rational};
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-9i64..9, 1i64..5), r * c).prop_map(move |v| {
                ExactMatrix::from_fn(r, c, |i, j| {
                    let (n, d) = v[i * c + j];
                    rational(n, d)
                })
            })
        })
    }

    #[test]
    fn product_and_transpose() {
        let a = ExactMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), rational(1, 2)]]).unwrap();
        let b = ExactMatrix::identity(2);
        assert_eq!(&a * &b, a);
        let p = &a * &a;
        assert_eq!(*p.get(0, 1), int(1) * int(2) + int(2) * rational(1, 2));
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.try_mul(&ExactMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn scalar_ratio_detection() {
        let a = ExactMatrix::from_rows(vec![vec![int(2), int(0)], vec![int(4), int(6)]]).unwrap();
        let b = ExactMatrix::from_rows(vec![vec![int(1), int(0)], vec![int(2), int(3)]]).unwrap();
        assert_eq!(a.scalar_ratio(&b), Some(int(2)));
        assert_eq!(b.scalar_ratio(&a), Some(rational(1, 2)));
        let c = ExactMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(2), int(3)]]).unwrap();
        assert_eq!(a.scalar_ratio(&c), None);
    }

    #[test]
    fn json_shape() {
        let a = ExactMatrix::from_rows(vec![vec![rational(1, 2), int(0)]]).unwrap();
        assert_eq!(a.to_json().unwrap(), r#"{"rows":1,"cols":2,"entries":[["1/2","0/1"]]}"#);
    }

    #[test]
    fn matrix_market_listing() {
        let a = ExactMatrix::from_rows(vec![vec![int(0), rational(-3, 4)], vec![int(1), int(0)]]).unwrap();
        let text = a.to_matrix_market();
        assert_eq!(
            text,
            "%%MatrixMarket matrix coordinate rational general\n2 2 2\n1 2 -3/4\n2 1 1/1\n"
        );
        assert_eq!(ExactMatrix::from_matrix_market(&text).unwrap(), a);
    }

    proptest! {
        #[test]
        fn json_roundtrip(m in small_matrix()) {
            prop_assert_eq!(ExactMatrix::from_json(&m.to_json().unwrap()).unwrap(), m);
        }

        #[test]
        fn transpose_reverses_products(a in small_matrix(), b in small_matrix()) {
            if let Ok(ab) = a.try_mul(&b) {
                prop_assert!(ab.transpose().same_entries(&(&b.transpose() * &a.transpose())));
            }
        }
    }
}
