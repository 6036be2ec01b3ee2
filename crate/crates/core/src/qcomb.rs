//! Exact integers, rationals and the classical / q-deformed counting
//! primitives every closed formula is built from.
//!
//! Binomials with out-of-range lower index evaluate to zero, so sums over
//! `k` can be written over the full index range and the nonzero terms pick
//! themselves out.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInteger = BigInt;
/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Field size `q = p^e` of a finite field, validated as a prime power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct QParameter {
    q: u32,
    p: u32,
    e: u32,
}

impl QParameter {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidQ(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidQ(q));
        }
        Ok(Self { q, p, e })
    }

    pub fn value(self) -> u32 {
        self.q
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    pub fn degree(self) -> u32 {
        self.e
    }

    pub fn is_prime(self) -> bool {
        self.e == 1
    }
}

impl TryFrom<u32> for QParameter {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Self::new(q)
    }
}

impl From<QParameter> for u32 {
    fn from(q: QParameter) -> u32 {
        q.q
    }
}

impl fmt::Display for QParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

fn smallest_prime_factor(n: u32) -> u32 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// `C(n, m)`, zero outside `0 <= m <= n`.
pub fn binomial(n: i64, m: i64) -> ExactInteger {
    if n < 0 || m < 0 || m > n {
        return BigInt::zero();
    }
    let m = m.min(n - m);
    let mut acc = BigInt::one();
    for i in 0..m {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u32) -> ExactInteger {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `1 + q + ... + q^(n-1)` for an arbitrary integer `q >= 1`.
pub fn q_int_value(n: u32, q: u64) -> ExactInteger {
    let q = BigInt::from(q);
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    for _ in 0..n {
        acc += &pow;
        pow *= &q;
    }
    acc
}

pub fn q_int(n: u32, q: QParameter) -> ExactInteger {
    q_int_value(n, q.value().into())
}

pub fn q_factorial_value(n: u32, q: u64) -> ExactInteger {
    (1..=n).fold(BigInt::one(), |acc, k| acc * q_int_value(k, q))
}

pub fn q_factorial(n: u32, q: QParameter) -> ExactInteger {
    q_factorial_value(n, q.value().into())
}

/// Gaussian binomial evaluated at an arbitrary integer `q >= 1`, by the
/// recurrence `G(n,m) = G(n-1,m-1) + q^m G(n-1,m)`. At `q = 1` this is the
/// ordinary binomial.
pub fn q_binomial_value(n: i64, m: i64, q: u64) -> ExactInteger {
    if n < 0 || m < 0 || m > n {
        return BigInt::zero();
    }
    let (n, m) = (n as usize, m.min(n - m) as usize);
    let q = BigInt::from(q);
    let q_pows: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |p| Some(p * &q))
        .take(m + 1)
        .collect();
    // row[k] holds G(r, k) for the current r; only k <= m is needed.
    let mut row = vec![BigInt::zero(); m + 1];
    row[0] = BigInt::one();
    for r in 1..=n {
        for k in (1..=m.min(r)).rev() {
            let carried = &q_pows[k] * &row[k];
            row[k] = &row[k - 1] + carried;
        }
    }
    row[m].clone()
}

pub fn gaussian_binomial(n: i64, m: i64, q: QParameter) -> ExactInteger {
    q_binomial_value(n, m, q.value().into())
}

/// `q^e` as an exact rational; negative exponents allowed.
pub fn q_power(q: u64, e: i64) -> ExactRational {
    let base = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

pub fn int_pow(base: u64, e: u32) -> ExactInteger {
    BigInt::from(base).pow(e)
}

pub fn rational(n: impl Into<BigInt>, d: impl Into<BigInt>) -> ExactRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// Reduced `"num/den"` form, denominator always written.
pub fn format_rational(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Multiplies a rational vector by the lcm of its denominators and divides
/// out the gcd of the numerators; the first nonzero entry is made positive.
pub fn primitive_integer_vector(v: &[ExactRational]) -> Vec<ExactInteger> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        let sign_flip = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in &mut ints {
            *x /= &g;
            if sign_flip {
                *x = -&*x;
            }
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: u32) -> QParameter {
        QParameter::new(v).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        for n in 0..10 {
            assert_eq!(binomial(n, 0), BigInt::one());
        }
    }

    #[test]
    fn q_integers_and_factorials() {
        assert_eq!(q_int(3, q(2)), BigInt::from(7));
        assert_eq!(q_int(0, q(5)), BigInt::zero());
        for v in [2, 3, 4, 5, 7] {
            assert_eq!(q_int(1, q(v)), BigInt::one());
            assert_eq!(q_factorial(0, q(v)), BigInt::one());
        }
        assert_eq!(q_factorial(3, q(2)), BigInt::from(21));
        assert_eq!(q_factorial(2, q(3)), BigInt::from(4));
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(4, 2, q(2)), BigInt::from(35));
        assert_eq!(gaussian_binomial(2, 1, q(3)), BigInt::from(4));
        assert_eq!(gaussian_binomial(7, 0, q(3)), BigInt::one());
        assert_eq!(gaussian_binomial(3, 4, q(2)), BigInt::zero());
    }

    #[test]
    fn gaussian_binomial_matches_factorial_quotient() {
        for v in [2, 3, 4, 5] {
            for n in 0..=10u32 {
                for m in 0..=n {
                    let quotient = q_factorial(n, q(v))
                        / (q_factorial(m, q(v)) * q_factorial(n - m, q(v)));
                    assert_eq!(gaussian_binomial(n.into(), m.into(), q(v)), quotient);
                }
            }
        }
    }

    #[test]
    fn gaussian_symmetry() {
        for v in [2, 3, 4, 5] {
            for n in 0..=12i64 {
                for m in 0..=n {
                    assert_eq!(gaussian_binomial(n, m, q(v)), gaussian_binomial(n, n - m, q(v)));
                }
            }
        }
    }

    #[test]
    fn recurrence_at_one_is_classical() {
        for n in 0..=15 {
            for m in -1..=n + 1 {
                assert_eq!(q_binomial_value(n, m, 1), binomial(n, m));
            }
        }
    }

    #[test]
    fn q_parameter_validation() {
        assert!(QParameter::new(4).is_ok());
        assert!(QParameter::new(9).unwrap().degree() == 2);
        assert_eq!(QParameter::new(8).unwrap().characteristic(), 2);
        for bad in [0, 1, 6, 12, 100] {
            assert!(QParameter::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rational_strings() {
        let r = rational(-6, 4);
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn reduction_is_structural() {
        assert_eq!(rational(10, -4), rational(-5, 2));
        assert_eq!(rational(0, 7), rational(0, -3));
    }

    proptest! {
        #[test]
        fn rational_string_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rational(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }

        #[test]
        fn primitive_vector_is_proportional(v in proptest::collection::vec((-20i64..20, 1i64..9), 1..8)) {
            let rats: Vec<_> = v.iter().map(|&(n, d)| rational(n, d)).collect();
            let ints = primitive_integer_vector(&rats);
            // every 2x2 minor vanishes
            for i in 0..rats.len() {
                for j in 0..rats.len() {
                    let lhs = &rats[i] * int(ints[j].clone());
                    let rhs = &rats[j] * int(ints[i].clone());
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
