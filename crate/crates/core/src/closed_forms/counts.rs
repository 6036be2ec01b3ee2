//! Configuration counts behind the spherical-function ladders: closed
//! forms, exhaustive enumeration, and the printed variants that differ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::{Family, Geometry};
use crate::qcomb::{binomial, format_rational, int_pow, q_binomial_value, q_int_value, ExactInteger, ExactRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    Omega,
    A,
    CEq,
    CUp,
    B,
    DEq,
    DUp,
    OmegaQ,
    AQ,
    CEqQ,
    CUpQ,
    BQ,
    DEqQ,
    DUpQ,
    NJ,
    SJ,
    Lemma1,
    Corollary2,
}

impl CountKind {
    pub const ALL: [CountKind; 18] = [
        CountKind::Omega,
        CountKind::A,
        CountKind::CEq,
        CountKind::CUp,
        CountKind::B,
        CountKind::DEq,
        CountKind::DUp,
        CountKind::OmegaQ,
        CountKind::AQ,
        CountKind::CEqQ,
        CountKind::CUpQ,
        CountKind::BQ,
        CountKind::DEqQ,
        CountKind::DUpQ,
        CountKind::NJ,
        CountKind::SJ,
        CountKind::Lemma1,
        CountKind::Corollary2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CountKind::Omega => "omega",
            CountKind::A => "a",
            CountKind::CEq => "c-eq",
            CountKind::CUp => "c-up",
            CountKind::B => "b",
            CountKind::DEq => "d-eq",
            CountKind::DUp => "d-up",
            CountKind::OmegaQ => "omega-q",
            CountKind::AQ => "a-q",
            CountKind::CEqQ => "c-eq-q",
            CountKind::CUpQ => "c-up-q",
            CountKind::BQ => "b-q",
            CountKind::DEqQ => "d-eq-q",
            CountKind::DUpQ => "d-up-q",
            CountKind::NJ => "n-j",
            CountKind::SJ => "s-j",
            CountKind::Lemma1 => "lemma1",
            CountKind::Corollary2 => "corollary2",
        }
    }

    pub fn family(self) -> Family {
        use CountKind::*;
        match self {
            Omega | A | CEq | CUp | B | DEq | DUp => Family::Subset,
            _ => Family::Subspace,
        }
    }

    /// Names of the parameters the kind reads, in display order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        use CountKind::*;
        match self {
            Omega | OmegaQ | NJ | SJ => &["n", "s", "j"],
            A | B | AQ | BQ => &["n", "s", "t", "k", "j"],
            CEq | CUp | DEq | DUp | CEqQ | CUpQ | DEqQ | DUpQ => &["n", "s", "t", "k"],
            Lemma1 => &["n", "s", "l", "t"],
            // s = dim W1, l = dim W2
            Corollary2 => &["n", "s", "l", "k"],
        }
    }

    /// Kinds whose printed closed form is known to differ from the count.
    pub fn has_printed_variant(self) -> bool {
        matches!(self, CountKind::DEqQ | CountKind::NJ)
    }
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CountKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        CountKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown count kind '{s}'")))
    }
}

/// Parameters of a count. Which fields matter depends on the kind, see
/// [`CountKind::parameter_names`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountParams {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
}

impl CountParams {
    fn get(&self, name: &str) -> usize {
        match name {
            "n" => self.n,
            "s" => self.s,
            "t" => self.t,
            "k" => self.k,
            "j" => self.j,
            "l" => self.l,
            _ => unreachable!("unknown parameter {name}"),
        }
    }

    pub fn describe(&self, kind: CountKind) -> String {
        kind.parameter_names()
            .iter()
            .map(|name| format!("{name}={}", self.get(name)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn reject(kind: CountKind, p: &CountParams) -> Error {
    Error::InvalidParameters(format!("parameters {} out of range for {kind}", p.describe(kind)))
}

/// Range check per kind.
pub fn validate(kind: CountKind, p: &CountParams) -> Result<()> {
    use CountKind::*;
    let half = 2 * p.s <= p.n;
    let ok = match kind {
        Omega | OmegaQ => p.s <= p.n && p.j <= p.s.min(p.n - p.s),
        A | B | AQ | BQ => half && p.t <= p.s && p.j <= p.s && p.k <= p.t,
        CEq | CUp | DEq | DUp | CEqQ | CUpQ | DEqQ | DUpQ => half && p.t >= 1 && p.t <= p.s && p.k < p.t,
        NJ | SJ => half && p.j <= p.s,
        Lemma1 => p.s <= p.n && p.l <= p.n && p.t <= p.s.min(p.l),
        Corollary2 => p.s + p.l <= p.n && p.k <= p.s + p.l,
    };
    if ok {
        Ok(())
    } else {
        Err(reject(kind, p))
    }
}

/// Every valid parameter tuple of a kind for a given `n`.
pub fn valid_params(kind: CountKind, n: usize) -> Vec<CountParams> {
    let mut out = Vec::new();
    for s in 0..=n {
        for t in 0..=n {
            for k in 0..=n {
                for j in 0..=n {
                    for l in 0..=n {
                        let p = CountParams { n, s, t, k, j, l };
                        // unused fields stay at zero so each tuple appears once
                        let used = kind.parameter_names();
                        let canonical = ["t", "k", "j", "l"].iter().all(|f| used.contains(f) || p.get(f) == 0);
                        if canonical && validate(kind, &p).is_ok() {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

fn gauss(n: usize, m: i64, q: u64) -> ExactInteger {
    q_binomial_value(n as i64, m, q)
}

fn signed_gauss(n: i64, m: i64, q: u64) -> ExactInteger {
    q_binomial_value(n, m, q)
}

fn q_pow_int(q: u64, e: i64) -> ExactInteger {
    assert!(e >= 0, "negative exponent in an integral count");
    int_pow(q, e as u32)
}

/// `Π_{i<j} (q^s - q^i)`.
fn falling_product(q: u64, s: usize, j: usize) -> ExactInteger {
    (0..j).fold(BigInt::one(), |acc, i| acc * (int_pow(q, s as u32) - int_pow(q, i as u32)))
}

/// Closed-form value. `q` must be given exactly for the subspace kinds.
pub fn count_closed_form(kind: CountKind, p: &CountParams, q: Option<u64>) -> Result<ExactInteger> {
    use CountKind::*;
    validate(kind, p)?;
    let (n, s, t, k, j, l) = (p.n as i64, p.s as i64, p.t as i64, p.k as i64, p.j as i64, p.l as i64);
    let qv = match (kind.family(), q) {
        (Family::Subset, None) => 1,
        (Family::Subspace, Some(q)) => q,
        (Family::Subset, Some(_)) => {
            return Err(Error::InvalidParameters(format!("{kind} is a subset count; no q expected")))
        }
        (Family::Subspace, None) => return Err(Error::InvalidParameters(format!("{kind} needs q"))),
    };
    Ok(match kind {
        Omega => binomial(s, s - j) * binomial(n - s, j),
        A => binomial(s - j, t - k) * binomial(j, k),
        CEq | DEq => BigInt::from(s - t + 1 + k),
        CUp | DUp => BigInt::from(n - s - k),
        B => binomial(s - j, s - j - (t - k)) * binomial(j, j - k),
        OmegaQ => signed_gauss(s, s - j, qv) * signed_gauss(n - s, j, qv) * q_pow_int(qv, j * j),
        AQ | BQ => {
            let (top, bottom) = if kind == AQ {
                (signed_gauss(s - j, t - k, qv), signed_gauss(j, k, qv))
            } else {
                (signed_gauss(s - j, s - j - (t - k), qv), signed_gauss(j, j - k, qv))
            };
            let b = top * bottom;
            if b.is_zero() {
                b
            } else {
                b * q_pow_int(qv, ((s - j) - (t - k)) * k)
            }
        }
        CEqQ | DEqQ => q_int_value((s - t + 1 + k) as u32, qv),
        CUpQ | DUpQ => q_pow_int(qv, s - t + 1 + k) * q_int_value((n - s - k) as u32, qv),
        NJ | SJ => gauss(p.n - p.s, j, qv) * falling_product(qv, p.s, p.j),
        Lemma1 => {
            // s = dim W, l = dim Z, t = dim(Z ∩ W)
            let b = signed_gauss(n - s, l - t, qv) * signed_gauss(s, t, qv);
            if b.is_zero() {
                b
            } else {
                b * q_pow_int(qv, (s - t) * (l - t))
            }
        }
        Corollary2 => q_pow_int(qv, s * k) * signed_gauss(l, k, qv),
    })
}

/// The printed explicit formula, where it differs in form from
/// [`count_closed_form`]. `None` for other kinds, and for `n-j` at `j = 0`
/// where the printed quotient divides by zero.
pub fn count_printed(kind: CountKind, p: &CountParams, q: u64) -> Result<Option<ExactRational>> {
    validate(kind, p)?;
    Ok(match kind {
        CountKind::DEqQ => {
            let (s, t, k) = (p.s as i64, p.t as i64, p.k as i64);
            Some(ExactRational::from_integer(signed_gauss(s - t + 1 + k, s - t - k, q)))
        }
        CountKind::NJ if p.j == 0 => None,
        CountKind::NJ => {
            let num = gauss(p.n - p.s, (p.n - p.s - p.j) as i64, q)
                * falling_product(q, p.s, p.j)
                * falling_product(q, p.j, p.j);
            let den = int_pow(q, p.j as u32) - BigInt::one();
            Some(ExactRational::new(num, den))
        }
        _ => None,
    })
}

/// Enumerates the points `x` of a level satisfying `pred`, returning the
/// first and last (for checking that a count is independent of the
/// representative).
fn representatives<G: Geometry>(
    g: &G,
    level: usize,
    pred: impl Fn(&G::Point) -> bool,
) -> Result<Vec<G::Point>> {
    let idx = g.level(level)?;
    let first = idx.points().iter().find(|x| pred(x)).cloned();
    let last = idx.points().iter().rev().find(|x| pred(x)).cloned();
    match (first, last) {
        (Some(a), Some(b)) if a == b => Ok(vec![a]),
        (Some(a), Some(b)) => Ok(vec![a, b]),
        _ => Err(Error::InvalidParameters(format!("no representative point on level {level}"))),
    }
}

fn count_level<G: Geometry>(g: &G, level: usize, pred: impl Fn(&G::Point) -> bool) -> Result<usize> {
    Ok(g.level(level)?.points().iter().filter(|y| pred(y)).count())
}

/// The count for every representative must agree.
fn uniform(counts: Vec<usize>, kind: CountKind, p: &CountParams) -> Result<ExactInteger> {
    let first = counts[0];
    if counts.iter().any(|&c| c != first) {
        return Err(Error::Inconsistency(format!(
            "{kind} at {} depends on the representative: {counts:?}",
            p.describe(kind)
        )));
    }
    Ok(BigInt::from(first))
}

/// Exhaustive count on the geometry `g`, which must be of the kind's family
/// and have `g.n() == p.n`.
pub fn count_oracle<G: Geometry>(g: &G, kind: CountKind, p: &CountParams) -> Result<ExactInteger> {
    use CountKind::*;
    validate(kind, p)?;
    if g.family() != kind.family() || g.n() != p.n {
        return Err(Error::InvalidParameters(format!(
            "{kind} needs the {} family with n = {}",
            kind.family(),
            p.n
        )));
    }
    let n = p.n;
    let (s, t, k, j, l) = (p.s, p.t, p.k, p.j, p.l);
    let base = g.basepoint(s);
    let dual = g.dual_basepoint(s);
    match kind {
        Omega | OmegaQ => Ok(BigInt::from(count_level(g, s, |x| g.distance(x, &base) == j)?)),
        A | AQ => {
            let reps = representatives(g, s, |x| g.distance(x, &base) == j)?;
            let counts = reps
                .iter()
                .map(|x| count_level(g, t, |y| g.contains(x, y) && g.pseudo_distance(y, &base) == k))
                .collect::<Result<Vec<_>>>()?;
            uniform(counts, kind, p)
        }
        CEq | CUp | CEqQ | CUpQ => {
            let target = if matches!(kind, CEq | CEqQ) { k } else { k + 1 };
            let reps = representatives(g, t - 1, |z| g.pseudo_distance(z, &base) == k)?;
            let counts = reps
                .iter()
                .map(|z| count_level(g, t, |y| g.contains(y, z) && g.pseudo_distance(y, &base) == target))
                .collect::<Result<Vec<_>>>()?;
            uniform(counts, kind, p)
        }
        B | BQ => {
            let reps = representatives(g, n - s, |x| g.distance(x, &dual) == j)?;
            let counts = reps
                .iter()
                .map(|x| count_level(g, n - t, |y| g.contains(y, x) && g.pseudo_distance(&dual, y) == k))
                .collect::<Result<Vec<_>>>()?;
            uniform(counts, kind, p)
        }
        DEq | DUp | DEqQ | DUpQ => {
            let target = if matches!(kind, DEq | DEqQ) { k } else { k + 1 };
            let reps = representatives(g, n - t + 1, |z| g.pseudo_distance(&dual, z) == k)?;
            let counts = reps
                .iter()
                .map(|z| count_level(g, n - t, |y| g.contains(z, y) && g.pseudo_distance(&dual, y) == target))
                .collect::<Result<Vec<_>>>()?;
            uniform(counts, kind, p)
        }
        NJ => Ok(BigInt::from(
            g.complements(&base).iter().filter(|w| g.distance(w, &dual) == j).count(),
        )),
        SJ => Ok(BigInt::from(count_level(g, s, |w| {
            g.is_complement(w, &dual) && g.distance(w, &base) == j
        })?)),
        Lemma1 => {
            let level = g.level(s)?;
            let reps = [level.point(0).clone(), level.point(level.len() - 1).clone()];
            let counts = reps
                .iter()
                .map(|w| count_level(g, l, |z| g.intersection_dim(z, w) == t))
                .collect::<Result<Vec<_>>>()?;
            uniform(counts, kind, p)
        }
        Corollary2 => {
            let w1 = g.basepoint(s);
            let w = g.basepoint(s + l);
            Ok(BigInt::from(count_level(g, k, |z| {
                g.contains(&w, z) && g.intersection_dim(z, &w1) == 0
            })?))
        }
    }
}

/// Closure witness: `Σ_j |N_j|` over all `j` equals the number of
/// complements of an `s`-space, `q^{s(n-s)}`.
pub fn complement_total(n: usize, s: usize, q: u64) -> ExactInteger {
    int_pow(q, (s * (n - s)) as u32)
}

/// One line of a count table.
#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub kind: CountKind,
    pub params: String,
    pub closed_form: String,
    pub oracle: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_agrees: Option<bool>,
}

/// Closed form, oracle and printed variant side by side for every valid
/// tuple of a kind, optionally restricted to one `s`.
pub fn count_table<G: Geometry>(g: &G, kind: CountKind, s: Option<usize>) -> Result<Vec<CountRow>> {
    let q = g.q().map(|q| u64::from(q.value()));
    let mut rows = Vec::new();
    for p in valid_params(kind, g.n()) {
        if s.is_some_and(|s| s != p.s) {
            continue;
        }
        let closed = count_closed_form(kind, &p, q)?;
        let oracle = count_oracle(g, kind, &p)?;
        let printed = match q {
            Some(q) => count_printed(kind, &p, q)?,
            None => None,
        };
        let printed_agrees = printed.as_ref().map(|v| *v == ExactRational::from_integer(oracle.clone()));
        rows.push(CountRow {
            kind,
            params: p.describe(kind),
            agree: closed == oracle,
            closed_form: closed.to_string(),
            oracle: oracle.to_string(),
            printed: printed.as_ref().map(format_rational),
            printed_agrees,
        });
    }
    Ok(rows)
}
