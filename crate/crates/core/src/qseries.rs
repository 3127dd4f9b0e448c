//! Truncated Laurent–Puiseux series in the nome q = e^{πiz}.
//!
//! Exponents live on the grid (1/24)Z and are stored by numerator. A series
//! knows its truncation `order`: every coefficient strictly below it is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{fmt_q, parse_q, q, rational_root, Q};

/// Number of grid points per unit exponent.
pub const GRID: i64 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series vanishes through its order; no inverse")]
    ZeroSeries,
    #[error("term q^({0}/24) has fractional exponent; z -> z+1 needs non-real roots of unity")]
    NonIntegralExponent(i64),
    #[error("exponent leaves the 1/24 grid: {0}")]
    GridOverflow(String),
    #[error("leading coefficient {0} has no rational root of the requested degree")]
    NoRationalRoot(String),
    #[error("malformed series data: {0}")]
    Parse(String),
}

/// An exponent `numerator/24` in units of powers of q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Exponent(pub i64);

impl Exponent {
    pub fn from_q_units(n: i64) -> Self {
        Exponent(n * GRID)
    }

    pub fn value(self) -> Q {
        Q::new(BigInt::from(self.0), BigInt::from(GRID))
    }

    pub fn from_rational(x: &Q) -> Result<Self, SeriesError> {
        let n = x * q(GRID);
        if !n.is_integer() {
            return Err(SeriesError::GridOverflow(fmt_q(x)));
        }
        n.to_integer()
            .to_i64()
            .map(Exponent)
            .ok_or_else(|| SeriesError::GridOverflow(fmt_q(x)))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.value()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<i64, Q>,
    order: i64,
}

impl QSeries {
    /// The zero series known through `order` (grid numerator).
    pub fn zero(order: i64) -> Self {
        QSeries { terms: BTreeMap::new(), order }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(0, q(1), order)
    }

    pub fn constant(c: Q, order: i64) -> Self {
        Self::monomial(0, c, order)
    }

    pub fn monomial(exp: i64, c: Q, order: i64) -> Self {
        let mut s = Self::zero(order);
        s.add_term(exp, c);
        s
    }

    /// Build from (grid numerator, coefficient) pairs; duplicates are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(terms: I, order: i64) -> Self {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Build from integer-exponent coefficients `coeffs[j]` of q^j.
    pub fn from_int_coeffs(coeffs: &[i64], order_q: i64) -> Self {
        Self::from_terms(
            coeffs.iter().enumerate().map(|(j, &c)| (j as i64 * GRID, q(c))),
            order_q * GRID,
        )
    }

    fn add_term(&mut self, e: i64, c: Q) {
        if e >= self.order || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn order_exp(&self) -> Exponent {
        Exponent(self.order)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at grid numerator `e` (caller is responsible for e < order).
    pub fn coeff(&self, e: i64) -> Q {
        self.terms.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of q^j for an integer j.
    pub fn coeff_q(&self, j: i64) -> Q {
        self.coeff(j * GRID)
    }

    /// Leading exponent; for a vanishing series this is its order.
    pub fn valuation(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.order)
    }

    pub fn leading(&self) -> Option<(i64, &Q)> {
        self.terms.iter().next().map(|(&e, c)| (e, c))
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        QSeries {
            terms: self.terms.range(..order).map(|(&e, c)| (e, c.clone())).collect(),
            order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (&e, c) in other.terms.range(..order) {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        QSeries { terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect(), order: self.order }
    }

    /// Multiply by q^{e/24}.
    pub fn mul_monomial(&self, e: i64) -> Self {
        QSeries { terms: self.terms.iter().map(|(&k, x)| (k + e, x.clone())).collect(), order: self.order + e }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation()).min(other.order + self.valuation());
        let mut acc: BTreeMap<i64, Q> = BTreeMap::new();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in other.terms.range(..order - e1) {
                *acc.entry(e1 + e2).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QSeries { terms: acc, order }
    }

    /// Split as c·q^v·(1 + u) and return (v, c, u-coefficients by offset, relative precision, step).
    fn normalized(&self) -> Result<(i64, Q, BTreeMap<i64, Q>, i64, i64), SeriesError> {
        let (v, c) = self.leading().ok_or(SeriesError::ZeroSeries)?;
        let c = c.clone();
        let inv = c.recip();
        let mut step = 0i64;
        let mut u = BTreeMap::new();
        for (&e, x) in self.terms.range(v + 1..) {
            step = step.gcd(&(e - v));
            u.insert(e - v, x * &inv);
        }
        if step == 0 {
            step = 1;
        }
        Ok((v, c, u, self.order - v, step))
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let (v, c, u, prec, step) = self.normalized()?;
        // h = 1/(1+U) on the sublattice step·Z of offsets
        let mut h: BTreeMap<i64, Q> = BTreeMap::new();
        h.insert(0, q(1));
        let mut n = step;
        while n < prec {
            let mut s = Q::zero();
            for (&j, uj) in u.range(..=n) {
                if let Some(hv) = h.get(&(n - j)) {
                    s -= uj * hv;
                }
            }
            if !s.is_zero() {
                h.insert(n, s);
            }
            n += step;
        }
        let ci = c.recip();
        Ok(QSeries { terms: h.into_iter().map(|(k, x)| (k - v, x * &ci)).collect(), order: prec - v })
    }

    pub fn pow_int(&self, e: i64) -> Result<Self, SeriesError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        // neutral element whose order cannot restrict the product
        let mut acc: Option<QSeries> = None;
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc.unwrap_or_else(|| Self::one(i64::MAX / 4)))
    }

    /// Principal rational power f^{num/den}; requires a rational root of the
    /// leading coefficient and a leading exponent that stays on the grid.
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Self, SeriesError> {
        assert!(den > 0);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if den == 1 {
            return self.pow_int(num);
        }
        let (v, c, u, prec, step) = self.normalized()?;
        let r = Q::new(BigInt::from(num), BigInt::from(den));
        let lead_root = rational_root(&c, den as u32).ok_or_else(|| SeriesError::NoRationalRoot(fmt_q(&c)))?;
        let lead = crate::arith::pow_q(&lead_root, num);
        if (v * num) % den != 0 {
            return Err(SeriesError::GridOverflow(format!("q^({}/24) to the power {num}/{den}", v)));
        }
        let ve = v * num / den;
        // n w_n = Σ_j (r j − (n − j)) u_j w_{n−j}, indices in multiples of step
        let mut w: BTreeMap<i64, Q> = BTreeMap::new();
        w.insert(0, q(1));
        let mut n = step;
        while n < prec {
            let mut s = Q::zero();
            for (&j, uj) in u.range(..=n) {
                if let Some(wv) = w.get(&(n - j)) {
                    s += (&r * q(j) - q(n - j)) * uj * wv;
                }
            }
            if !s.is_zero() {
                w.insert(n, s / q(n));
            }
            n += step;
        }
        Ok(QSeries { terms: w.into_iter().map(|(k, x)| (k + ve, x * &lead)).collect(), order: prec + ve })
    }

    /// q·d/dq: a·q^e ↦ a·e·q^e.
    pub fn theta_op(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (&e, c) in &self.terms {
            out.add_term(e, c * Q::new(BigInt::from(e), BigInt::from(GRID)));
        }
        out
    }

    pub fn log_derivative(&self) -> Result<Self, SeriesError> {
        Ok(self.theta_op().mul(&self.inverse()?))
    }

    /// Substitute z ↦ z+1: the coefficient of q^j picks up (−1)^j.
    pub fn shift_z_plus_1(&self) -> Result<Self, SeriesError> {
        let mut out = Self::zero(self.order);
        for (&e, c) in &self.terms {
            if e % GRID != 0 {
                return Err(SeriesError::NonIntegralExponent(e));
            }
            let sign = if (e / GRID) % 2 == 0 { c.clone() } else { -c };
            out.add_term(e, sign);
        }
        Ok(out)
    }

    /// Substitute z ↦ m·z: q^e ↦ q^{m e}.
    pub fn scale_variable(&self, m: &Q) -> Result<Self, SeriesError> {
        assert!(m.is_positive(), "scale factor must be positive");
        let mut out = BTreeMap::new();
        for (&e, c) in &self.terms {
            let ne = m * q(e);
            if !ne.is_integer() {
                return Err(SeriesError::GridOverflow(format!("q^({e}/24) scaled by {}", fmt_q(m))));
            }
            out.insert(ne.to_integer().to_i64().unwrap(), c.clone());
        }
        let o = (m * q(self.order)).ceil().to_integer().to_i64().unwrap();
        Ok(QSeries { terms: out, order: o })
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// `self ≡ other (mod 2)`: the difference has even integer coefficients.
    pub fn congruent_mod2(&self, other: &Self) -> bool {
        let d = self.sub(other);
        d.terms.values().all(|c| c.is_integer() && c.to_integer().is_even())
    }

    pub fn first_difference(&self, other: &Self) -> Option<(i64, Q, Q)> {
        let order = self.order.min(other.order);
        let mut keys: Vec<i64> = self.terms.keys().chain(other.terms.keys()).copied().filter(|&e| e < order).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().find_map(|e| {
            let (a, b) = (self.coeff(e), other.coeff(e));
            (a != b).then_some((e, a, b))
        })
    }

    /// Equality of all coefficients below the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn to_data(&self) -> SeriesData {
        SeriesData {
            terms: self.terms.iter().map(|(&e, c)| (e, fmt_q(c))).collect(),
            order: self.order,
        }
    }

    pub fn from_data(d: &SeriesData) -> Result<Self, SeriesError> {
        let mut terms = Vec::with_capacity(d.terms.len());
        for (e, c) in &d.terms {
            terms.push((*e, parse_q(c).map_err(SeriesError::Parse)?));
        }
        Ok(Self::from_terms(terms, d.order))
    }
}

/// Serialized form: exponent numerators with "p/q" coefficients, plus the order numerator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesData {
    pub terms: Vec<(i64, String)>,
    pub order: i64,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_data().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let data = SeriesData::deserialize(d)?;
        QSeries::from_data(&data).map_err(serde::de::Error::custom)
    }
}

fn fmt_exp(e: i64) -> String {
    let x = Q::new(BigInt::from(e), BigInt::from(GRID));
    if x.is_integer() {
        format!("q^{}", x.numer())
    } else {
        format!("q^({})", fmt_q(&x))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&e, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if e == 0 {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_exp(e))?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), fmt_exp(e))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", fmt_exp(self.order))
    }
}

/// θ₃(z) = Σ_{n∈Z} q^{n²} through exponent `order`.
pub fn theta3(order: i64) -> QSeries {
    let mut s = QSeries::one(order);
    let mut n: i64 = 1;
    while n * n * GRID < order {
        s.add_term(n * n * GRID, q(2));
        n += 1;
    }
    s
}

/// θ₂(z) = Σ_{n∈Z} q^{(n+1/2)²} through exponent `order`.
pub fn theta2(order: i64) -> QSeries {
    let mut s = QSeries::zero(order);
    let mut n: i64 = 0;
    // (n+1/2)² = (2n+1)²/4 → numerator 6(2n+1)²
    while 6 * (2 * n + 1) * (2 * n + 1) < order {
        s.add_term(6 * (2 * n + 1) * (2 * n + 1), q(2));
        n += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qr;

    fn poly(c: &[i64], order_q: i64) -> QSeries {
        QSeries::from_int_coeffs(c, order_q)
    }

    #[test]
    fn difference_of_squares() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, -1], 10);
        assert_eq!(a.mul(&b), poly(&[1, 0, -1], 10));
    }

    #[test]
    fn geometric_inverse() {
        let inv = poly(&[1, -1], 12).inverse().unwrap();
        assert_eq!(inv, poly(&[1; 12], 12));
    }

    #[test]
    fn laurent_inverse() {
        let f = poly(&[0, 0, 1, 1], 10);
        let inv = f.inverse().unwrap();
        assert_eq!(inv.valuation(), -2 * GRID);
        assert_eq!(inv.order(), 10 * GRID - 4 * GRID);
        assert_eq!(inv.coeff_q(-1), q(-1));
        assert_eq!(inv.coeff_q(0), q(1));
        assert!(f.mul(&inv).agrees_with(&QSeries::one(1 << 20)));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(QSeries::zero(100).inverse(), Err(SeriesError::ZeroSeries));
    }

    #[test]
    fn theta3_eighth_power() {
        let t = theta3(3 * GRID).pow_int(8).unwrap();
        assert_eq!(t.coeff_q(1), q(16));
        assert_eq!(t.coeff_q(2), q(112));
        assert_eq!(t.pow_int(0).unwrap().coeff(0), q(1));
    }

    #[test]
    fn theta_op_basics() {
        assert!(QSeries::constant(q(5), 100).theta_op().is_zero());
        let f = QSeries::monomial(6, q(1), 100);
        assert_eq!(f.theta_op(), QSeries::monomial(6, qr(1, 4), 100));
    }

    #[test]
    fn log_derivative_of_monomial() {
        let f = QSeries::monomial(7, q(3), 200);
        let l = f.log_derivative().unwrap();
        assert_eq!(l.coeff(0), qr(7, 24));
        assert_eq!(l.num_terms(), 1);
    }

    #[test]
    fn shift_rules() {
        assert_eq!(poly(&[1, 1, 1], 5).shift_z_plus_1().unwrap(), poly(&[1, -1, 1], 5));
        let frac = QSeries::monomial(6, q(1), 100);
        assert_eq!(frac.shift_z_plus_1(), Err(SeriesError::NonIntegralExponent(6)));
    }

    #[test]
    fn scale_variable_rules() {
        let t4 = theta3(20 * GRID).scale_variable(&q(4)).unwrap();
        assert_eq!(t4.coeff_q(4), q(2));
        assert_eq!(t4.coeff_q(16), q(2));
        assert_eq!(t4.coeff_q(1), q(0));
        let half = QSeries::monomial(2, q(1), 100).scale_variable(&qr(1, 2)).unwrap();
        assert_eq!(half.valuation(), 1);
        assert!(QSeries::monomial(1, q(1), 100).scale_variable(&qr(1, 2)).is_err());
    }

    #[test]
    fn rational_power_roundtrip() {
        let f = poly(&[4, 3, 0, 7, 1], 20);
        let r = f.pow_rational(1, 2).unwrap();
        assert!(r.mul(&r).agrees_with(&f));
        let c = poly(&[8, 1, 2], 20).pow_rational(2, 3).unwrap();
        assert!(c.pow_int(3).unwrap().agrees_with(&poly(&[8, 1, 2], 20).pow_int(2).unwrap()));
    }

    #[test]
    fn serialization_roundtrip() {
        let f = QSeries::from_terms([(0, q(1)), (6, qr(-3, 7))], 48);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<QSeries>(&s).unwrap(), f);
        assert_eq!(format!("{f}"), "1 - 3/7*q^(1/4) + O(q^2)");
    }

    #[test]
    fn theta2_leading_terms() {
        let t = theta2(10 * GRID);
        assert_eq!(t.coeff(6), q(2));
        assert_eq!(t.coeff(54), q(2));
        assert_eq!(t.num_terms(), 3);
    }
}
