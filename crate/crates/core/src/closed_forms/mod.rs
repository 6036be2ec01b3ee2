//! Direct evaluators for the closed formulas: spherical functions,
//! coefficient ladders, eigenvalues and the complement pairing.
//!
//! Every sum runs over all `k` with out-of-range binomials read as zero;
//! the tighter summation bounds are then asserted as redundant.

pub mod counts;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::level::{Family, Geometry};
use crate::qcomb::{
    binomial, factorial, format_rational, q_binomial_value, q_factorial_value, q_int_value, q_power, ExactInteger,
    ExactRational, QParameter,
};
use crate::subspace::SubspaceGeometry;

use counts::{count_closed_form, count_oracle, count_printed, CountKind, CountParams};

fn ratio(n: ExactInteger, d: ExactInteger) -> ExactRational {
    BigRational::new(n, d)
}

fn check_range(n: usize, s: usize, t: usize, j: usize) -> Result<()> {
    if 2 * s > n || t > s || j > s.min(n - s) {
        return Err(Error::InvalidParameters(format!(
            "need t <= s <= n/2 and j <= min(s, n-s); got n = {n}, s = {s}, t = {t}, j = {j}"
        )));
    }
    Ok(())
}

fn family_q(family: Family, q: Option<QParameter>) -> Result<Option<u64>> {
    match (family, q) {
        (Family::Subset, None) => Ok(None),
        (Family::Subspace, Some(q)) => Ok(Some(q.value().into())),
        (Family::Subset, Some(_)) => Err(Error::InvalidParameters("the subset family takes no q".into())),
        (Family::Subspace, None) => Err(Error::InvalidParameters("the subspace family needs q".into())),
    }
}

/// `γ_t^k = C(s,t)^{-1} (s-t+k)!(n-s-k)! / ((s-t)!(n-s)!)`.
pub fn gamma(n: usize, s: usize, t: usize, k: usize) -> ExactRational {
    ratio(
        factorial((s - t + k) as u32) * factorial((n - s - k) as u32),
        binomial(s as i64, t as i64) * factorial((s - t) as u32) * factorial((n - s) as u32),
    )
}

/// `γ(q)_t^k`, the same with `q`-factorials and a Gaussian binomial.
pub fn q_gamma(n: usize, s: usize, t: usize, k: usize, q: u64) -> ExactRational {
    ratio(
        q_factorial_value((s - t + k) as u32, q) * q_factorial_value((n - s - k) as u32, q),
        q_binomial_value(s as i64, t as i64, q) * q_factorial_value((s - t) as u32, q) * q_factorial_value((n - s) as u32, q),
    )
}

fn summation_bounds(s: usize, t: usize, j: usize) -> (usize, usize) {
    ((t + j).saturating_sub(s), j.min(t))
}

/// Sums `term(k)` over `0..=t`, requiring every term outside
/// `[max(0, t+j-s), min(j,t)]` to vanish.
fn bounded_sum(s: usize, t: usize, j: usize, term: impl Fn(usize) -> ExactRational) -> Result<ExactRational> {
    let (lo, hi) = summation_bounds(s, t, j);
    let mut total = BigRational::zero();
    for k in 0..=t {
        let v = term(k);
        if (k < lo || k > hi) && !v.is_zero() {
            return Err(Error::Inconsistency(format!(
                "term k = {k} outside [{lo}, {hi}] is nonzero at s = {s}, t = {t}, j = {j}"
            )));
        }
        total += v;
    }
    Ok(total)
}

fn sign(k: usize) -> ExactRational {
    if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// `Φ_t(j) = Σ_k (-1)^k C(s-j,t-k) C(j,k) γ_t^k`.
pub fn classical_spherical(n: usize, s: usize, t: usize, j: usize) -> Result<ExactRational> {
    check_range(n, s, t, j)?;
    bounded_sum(s, t, j, |k| {
        let b = binomial(s as i64 - j as i64, t as i64 - k as i64) * binomial(j as i64, k as i64);
        sign(k) * BigRational::from_integer(b) * gamma(n, s, t, k)
    })
}

/// `Φ(q)_t(j) = Σ_k (-1)^k q^{k(k-1-2j)/2} [s-j,t-k]_q [j,k]_q γ(q)_t^k`,
/// for any integer `q >= 1`; `q = 1` is the specialization.
pub fn q_spherical_value(n: usize, s: usize, t: usize, j: usize, q: u64) -> Result<ExactRational> {
    check_range(n, s, t, j)?;
    bounded_sum(s, t, j, |k| {
        let b = q_binomial_value(s as i64 - j as i64, t as i64 - k as i64, q) * q_binomial_value(j as i64, k as i64, q);
        if b.is_zero() {
            return BigRational::zero();
        }
        // k(k-1) is even, so the exponent is an integer
        let e = (k * (k.saturating_sub(1)) / 2) as i64 - (k * j) as i64;
        sign(k) * q_power(q, e) * BigRational::from_integer(b) * q_gamma(n, s, t, k, q)
    })
}

/// Closed-form spherical function at distance `j`.
pub fn spherical_closed_form(family: Family, n: usize, s: usize, t: usize, j: usize, q: Option<QParameter>) -> Result<ExactRational> {
    match family_q(family, q)? {
        None => classical_spherical(n, s, t, j),
        Some(q) => q_spherical_value(n, s, t, j, q),
    }
}

/// Dual spherical function on level `n - s`: complementation keeps the
/// distance, so this is the primal value at the same `j`.
pub fn dual_spherical(family: Family, n: usize, s: usize, t: usize, j: usize, q: Option<QParameter>) -> Result<ExactRational> {
    spherical_closed_form(family, n, s, t, j, q)
}

/// The sum collapsed to its `k = j` term. Exact for `t = s`, where the
/// lower bound `t + j - s` equals `j`.
pub fn dual_single_term(n: usize, s: usize, t: usize, j: usize, q: u64) -> Result<ExactRational> {
    check_range(n, s, t, j)?;
    if j > t {
        return Ok(BigRational::zero());
    }
    let k = j;
    let b = q_binomial_value(s as i64 - j as i64, t as i64 - k as i64, q);
    let e = (k * k.saturating_sub(1) / 2) as i64 - (k * j) as i64;
    Ok(sign(k) * q_power(q, e) * BigRational::from_integer(b) * q_gamma(n, s, t, k, q))
}

/// `λ_t = (n-s)(s-t) - (s-t+1)t`, resp.
/// `λ(q)_t = q (n-s)_q (s-t)_q - (s-t+1)_q t_q`.
pub fn eigenvalue_closed_form(family: Family, n: usize, s: usize, t: usize, q: Option<QParameter>) -> Result<ExactRational> {
    check_range(n, s, t, 0)?;
    Ok(match family_q(family, q)? {
        None => {
            let (n, s, t) = (n as i64, s as i64, t as i64);
            BigRational::from_integer(BigInt::from((n - s) * (s - t) - (s - t + 1) * t))
        }
        Some(q) => {
            let qi = |m: usize| q_int_value(m as u32, q);
            BigRational::from_integer(BigInt::from(q) * qi(n - s) * qi(s - t) - qi(s - t + 1) * qi(t))
        }
    })
}

/// The unsimplified `q (n-s)_q ((s-t)_q - (s-t+1)_q t_q / (q (n-s)_q))`;
/// `None` when `n = s`.
pub fn eigenvalue_q_unsimplified(n: usize, s: usize, t: usize, q: u64) -> Option<ExactRational> {
    let qi = |m: usize| BigRational::from_integer(q_int_value(m as u32, q));
    let outer = BigRational::from_integer(BigInt::from(q)) * qi(n - s);
    if outer.is_zero() {
        return None;
    }
    Some(&outer * (qi(s - t) - qi(s - t + 1) * qi(t) / &outer))
}

/// Closed-form spherical functions of one level, one row per `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphericalTable {
    pub family: Family,
    pub n: usize,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    pub rows: Vec<SphericalRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphericalRow {
    pub t: usize,
    pub values: Vec<String>,
}

impl SphericalTable {
    pub fn closed_form(family: Family, n: usize, s: usize, q: Option<QParameter>) -> Result<Self> {
        check_range(n, s, 0, 0)?;
        let rows = (0..=s)
            .map(|t| {
                let values = (0..=s)
                    .map(|j| spherical_closed_form(family, n, s, t, j, q).map(|v| format_rational(&v)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SphericalRow { t, values })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            family,
            n,
            s,
            q: q.map(QParameter::value),
            rows,
        })
    }

    /// From exact profiles indexed by `t`.
    pub fn from_profiles(family: Family, n: usize, s: usize, q: Option<QParameter>, profiles: &[Vec<ExactRational>]) -> Self {
        Self {
            family,
            n,
            s,
            q: q.map(QParameter::value),
            rows: profiles
                .iter()
                .enumerate()
                .map(|(t, p)| SphericalRow {
                    t,
                    values: p.iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }

    /// Header `t,j0,j1,...`, then one line per `t`.
    pub fn to_csv(&self) -> Result<String> {
        let width = self.rows.first().map_or(0, |r| r.values.len());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t".to_string()];
        header.extend((0..width).map(|j| format!("j{j}")));
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.t.to_string()];
            rec.extend(row.values.iter().cloned());
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Values `α^k` (or `β^k`) for `k = 0..=t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientLadder {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(serialize_with = "serialize_rationals")]
    pub values: Vec<ExactRational>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[ExactRational], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(format_rational))
}

impl CoefficientLadder {
    /// First `k` where `eq[k] α^k + up[k] α^{k+1} ≠ 0`.
    pub fn recurrence_violation(&self, eq: &[ExactInteger], up: &[ExactInteger]) -> Option<usize> {
        (0..self.t).find(|&k| {
            let lhs = BigRational::from_integer(eq[k].clone()) * &self.values[k]
                + BigRational::from_integer(up[k].clone()) * &self.values[k + 1];
            !lhs.is_zero()
        })
    }
}

fn ladder_check(n: usize, s: usize, t: usize) -> Result<()> {
    if 2 * s > n || t > s {
        return Err(Error::InvalidParameters(format!("need t <= s <= n/2; got n = {n}, s = {s}, t = {t}")));
    }
    Ok(())
}

/// Closed-form `α_t^k`, resp. `α(q)_t^k = (-1)^k γ(q)_t^k q^{-(k(s-t+1) + k(k-1)/2)}`.
pub fn alpha_ladder(n: usize, s: usize, t: usize, q: Option<QParameter>) -> Result<CoefficientLadder> {
    ladder_check(n, s, t)?;
    let values = (0..=t)
        .map(|k| match q {
            None => sign(k) * gamma(n, s, t, k),
            Some(q) => {
                let qv = u64::from(q.value());
                let e = (k * (s - t + 1) + k * k.saturating_sub(1) / 2) as i64;
                sign(k) * q_gamma(n, s, t, k, qv) * q_power(qv, -e)
            }
        })
        .collect();
    Ok(CoefficientLadder {
        n,
        s,
        t,
        q: q.map(QParameter::value),
        values,
    })
}

/// `x^{k+1} = -eq[k] / up[k] · x^k` from a starting value.
pub fn ladder_from_counts(start: ExactRational, eq: &[ExactInteger], up: &[ExactInteger]) -> Result<Vec<ExactRational>> {
    let mut values = vec![start];
    for (e, u) in eq.iter().zip(up) {
        if u.is_zero() {
            return Err(Error::Inconsistency("zero count in ladder denominator".into()));
        }
        let next = -values.last().unwrap() * ratio(e.clone(), u.clone());
        values.push(next);
    }
    Ok(values)
}

fn ladder_counts(kinds: (CountKind, CountKind), n: usize, s: usize, t: usize, q: Option<u64>) -> Result<(Vec<ExactInteger>, Vec<ExactInteger>)> {
    let mut eq = Vec::new();
    let mut up = Vec::new();
    for k in 0..t {
        let p = CountParams { n, s, t, k, ..Default::default() };
        eq.push(count_closed_form(kinds.0, &p, q)?);
        up.push(count_closed_form(kinds.1, &p, q)?);
    }
    Ok((eq, up))
}

/// Closed-form `C` counts for the `α` recurrence, `k = 0..t`.
pub fn alpha_counts(n: usize, s: usize, t: usize, q: Option<QParameter>) -> Result<(Vec<ExactInteger>, Vec<ExactInteger>)> {
    let kinds = if q.is_some() { (CountKind::CEqQ, CountKind::CUpQ) } else { (CountKind::CEq, CountKind::CUp) };
    ladder_counts(kinds, n, s, t, q.map(|q| q.value().into()))
}

/// Closed-form `D` counts for the `β` recurrence, `k = 0..t`.
pub fn beta_counts(n: usize, s: usize, t: usize, q: Option<QParameter>) -> Result<(Vec<ExactInteger>, Vec<ExactInteger>)> {
    let kinds = if q.is_some() { (CountKind::DEqQ, CountKind::DUpQ) } else { (CountKind::DEq, CountKind::DUp) };
    ladder_counts(kinds, n, s, t, q.map(|q| q.value().into()))
}

/// Oracle `C` or `D` counts, enumerated on `g`.
pub fn oracle_ladder_counts<G: Geometry>(g: &G, s: usize, t: usize, dual: bool) -> Result<(Vec<ExactInteger>, Vec<ExactInteger>)> {
    let subset = g.family() == Family::Subset;
    let kinds = match (dual, subset) {
        (false, true) => (CountKind::CEq, CountKind::CUp),
        (false, false) => (CountKind::CEqQ, CountKind::CUpQ),
        (true, true) => (CountKind::DEq, CountKind::DUp),
        (true, false) => (CountKind::DEqQ, CountKind::DUpQ),
    };
    let mut eq = Vec::new();
    let mut up = Vec::new();
    for k in 0..t {
        let p = CountParams { n: g.n(), s, t, k, ..Default::default() };
        eq.push(count_oracle(g, kinds.0, &p)?);
        up.push(count_oracle(g, kinds.1, &p)?);
    }
    Ok((eq, up))
}

/// `β_t^k` from `β^0 = [s, s-t]^{-1}` and the `D` recurrence.
pub fn beta_ladder(n: usize, s: usize, t: usize, q: Option<QParameter>) -> Result<CoefficientLadder> {
    ladder_check(n, s, t)?;
    let qv = q.map_or(1, |q| u64::from(q.value()));
    let start = ratio(BigInt::one(), q_binomial_value(s as i64, (s - t) as i64, qv));
    let (eq, up) = beta_counts(n, s, t, q)?;
    Ok(CoefficientLadder {
        n,
        s,
        t,
        q: q.map(QParameter::value),
        values: ladder_from_counts(start, &eq, &up)?,
    })
}

/// The ladder as a radial function on level `t` (`h(Y) = α^{ℓ(Y, X_0)}`),
/// or on level `n - t` for the dual ladder (`h(Y') = β^{ℓ(X_0', Y')}`).
pub fn ladder_function<G: Geometry>(g: &G, ladder: &CoefficientLadder, dual: bool) -> Result<Vec<ExactRational>> {
    let (level, center) = if dual {
        (g.n() - ladder.t, g.dual_basepoint(ladder.s))
    } else {
        (ladder.t, g.basepoint(ladder.s))
    };
    let idx = g.level(level)?;
    idx.points()
        .iter()
        .map(|y| {
            let k = if dual { g.pseudo_distance(&center, y) } else { g.pseudo_distance(y, &center) };
            ladder
                .values
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Inconsistency(format!("pseudo-distance {k} beyond the ladder")))
        })
        .collect()
}

/// Side-by-side values of `(C_s^* φ_s)(W_0)`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub n: usize,
    pub s: usize,
    pub q: u32,
    /// Counts `|N_j|` by enumeration, `j = 0..=s`.
    pub complement_counts: Vec<String>,
    /// `Σ_j |N_j| φ(q)_s(j)` with enumerated `|N_j|`.
    pub value: String,
    pub nonzero: bool,
    /// The same sum with the printed `|N_j|` (the `j = 0` term taken as 1).
    pub with_printed_counts: String,
    /// `1 + Σ_{j>=1} (-1)^j q^{j(j-3)/2} Π_{i<j}(q^s - q^i) Π_{0<i<j}(q^i - 1)`.
    pub printed_closed_sum: String,
    pub printed_agrees: bool,
}

/// Pairing value of the top dual spherical function with the complement
/// operator, using enumerated complement counts.
pub fn theorem5_pairing(n: usize, s: usize, q: QParameter) -> Result<PairingReport> {
    if s == 0 || 2 * s > n {
        return Err(Error::InvalidParameters(format!("pairing needs 1 <= s <= n/2; s = {s}, n = {n}")));
    }
    let g = SubspaceGeometry::new(n, q)?;
    let qv = u64::from(q.value());
    let mut value = BigRational::zero();
    let mut printed_value = BigRational::zero();
    let mut counts = Vec::new();
    for j in 0..=s {
        let p = CountParams { n, s, j, ..Default::default() };
        let nj = count_oracle(&g, CountKind::NJ, &p)?;
        let phi = q_spherical_value(n, s, s, j, qv)?;
        value += BigRational::from_integer(nj.clone()) * &phi;
        let printed = count_printed(CountKind::NJ, &p, qv)?.unwrap_or_else(BigRational::one);
        printed_value += printed * &phi;
        counts.push(nj.to_string());
    }
    let closed = printed_closed_sum(s, qv);
    Ok(PairingReport {
        n,
        s,
        q: q.value(),
        complement_counts: counts,
        nonzero: !value.is_zero(),
        printed_agrees: closed == value,
        value: format_rational(&value),
        with_printed_counts: format_rational(&printed_value),
        printed_closed_sum: format_rational(&closed),
    })
}

/// The printed simplification of the pairing sum.
pub fn printed_closed_sum(s: usize, q: u64) -> ExactRational {
    let qb = BigInt::from(q);
    let mut total = BigRational::one();
    for j in 1..=s {
        let a = (0..j).fold(BigInt::one(), |acc, i| acc * (qb.pow(s as u32) - qb.pow(i as u32)));
        let b = (1..j).fold(BigInt::one(), |acc, i| acc * (qb.pow(i as u32) - BigInt::one()));
        // j(j-3) is even
        let e = (j as i64 * (j as i64 - 3)) / 2;
        total += sign(j) * q_power(q, e) * BigRational::from_integer(a * b);
    }
    total
}

/// Weighted inner product `Σ_j w_j f(j) g(j)` of two profiles.
pub fn weighted_profile_product(weights: &[ExactInteger], f: &[ExactRational], g: &[ExactRational]) -> ExactRational {
    weights
        .iter()
        .zip(f.iter().zip(g))
        .fold(BigRational::zero(), |acc, (w, (a, b))| acc + BigRational::from_integer(w.clone()) * a * b)
}
