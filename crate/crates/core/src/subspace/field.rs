//! Finite fields `F_q`, `q = p^e`, as lookup tables.
//!
//! An element is stored as the integer whose base-`p` digits are the
//! coefficients of its polynomial residue (constant term least
//! significant). For prime `q` this is just the residue.

use crate::error::{Error, Result};
use crate::qcomb::QParameter;

/// Table-driven arithmetic; elements are `u8` codes in `0..q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    q: QParameter,
    /// Monic modulus, coefficients low degree first, length `e + 1`.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

pub type FieldElement = u8;

/// Largest supported field; element codes must fit in a byte.
pub const MAX_FIELD_SIZE: u32 = 256;

impl FiniteField {
    /// Field of size `q` using the default modulus: the first monic
    /// irreducible polynomial of degree `e` in lexicographic coefficient
    /// order. For `F_4` this is `x^2 + x + 1`.
    pub fn new(q: QParameter) -> Result<Self> {
        let (p, e) = (q.characteristic(), q.degree());
        if q.value() > MAX_FIELD_SIZE {
            return Err(Error::InvalidParameters(format!(
                "field size {} exceeds {MAX_FIELD_SIZE}",
                q.value()
            )));
        }
        if e == 1 {
            return Self::with_modulus(q, vec![0, 1]);
        }
        let modulus = (0..p.pow(e))
            .map(|code| {
                let mut coeffs = digits(code, p, e as usize);
                coeffs.push(1);
                coeffs
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        Self::with_modulus(q, modulus)
    }

    /// Field of size `q` reduced modulo a caller-supplied monic polynomial
    /// (coefficients low degree first).
    pub fn with_modulus(q: QParameter, modulus: Vec<u32>) -> Result<Self> {
        let (p, e) = (q.characteristic(), q.degree() as usize);
        let reducible = || Error::ReducibleModulus(modulus.clone(), p);
        if modulus.len() != e + 1 || modulus[e] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(reducible());
        }
        if !is_irreducible(&modulus, p) {
            return Err(reducible());
        }
        let size = q.value() as usize;
        let mut add = vec![0u8; size * size];
        let mut mul = vec![0u8; size * size];
        for a in 0..size {
            let pa = digits(a as u32, p, e);
            for b in 0..size {
                let pb = digits(b as u32, p, e);
                let sum: Vec<u32> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
                add[a * size + b] = undigits(&sum, p) as u8;
                mul[a * size + b] = undigits(&poly_mul_mod(&pa, &pb, &modulus, p), p) as u8;
            }
        }
        let mut neg = vec![0u8; size];
        let mut inv = vec![0u8; size];
        for a in 0..size {
            neg[a] = (0..size).find(|&b| add[a * size + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (0..size)
                    .find(|&b| mul[a * size + b] == 1)
                    .ok_or_else(reducible)? as u8;
            }
        }
        Ok(Self {
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn q(&self) -> QParameter {
        self.q
    }

    pub fn size(&self) -> usize {
        self.q.value() as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size()).map(|a| a as u8)
    }
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues (each of degree < e) reduced modulo the monic
/// `modulus` of degree e.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (e..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate() {
            let idx = deg - e + k;
            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
        }
    }
    prod.truncate(e);
    prod.resize(e, 0);
    prod
}

/// A monic polynomial of degree `e` is irreducible over `F_p` iff it has no
/// monic factor of degree `1..=e/2`. Trial division is fine at these sizes.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let e = poly.len() - 1;
    if e == 0 {
        return false;
    }
    for d in 1..=e / 2 {
        for code in 0..p.pow(d as u32) {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u32], monic: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let d = monic.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        for (k, &m) in monic.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p * p - lead * m % p) % p;
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u32) -> FiniteField {
        FiniteField::new(QParameter::new(q).unwrap()).unwrap()
    }

    fn check_axioms(f: &FiniteField) {
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            check_axioms(&field(q));
        }
    }

    #[test]
    fn default_f4_modulus() {
        assert_eq!(field(4).modulus(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_reducible_modulus() {
        let q4 = QParameter::new(4).unwrap();
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(FiniteField::with_modulus(q4, vec![1, 0, 1]).is_err());
        assert!(FiniteField::with_modulus(q4, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn nonzero_elements_form_a_cyclic_group() {
        for q in [4, 8, 9] {
            let f = field(q);
            let generator = f.elements().skip(1).find(|&g| {
                let mut x = 1u8;
                let mut order = 0;
                loop {
                    x = f.mul(x, g);
                    order += 1;
                    if x == 1 {
                        break;
                    }
                }
                order == q - 1
            });
            assert!(generator.is_some(), "F_{q} has no generator");
        }
    }
}
