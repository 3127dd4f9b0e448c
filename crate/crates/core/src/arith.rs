//! Small integer and rational helpers shared by every module.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    v.sort_unstable();
    v
}

pub fn sigma(n: u64) -> u64 {
    divisors(n).iter().sum()
}

pub fn num_divisors(n: u64) -> u64 {
    divisors(n).len() as u64
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn prime_factors_big(n: &BigInt) -> Vec<u64> {
    let n = n.abs().to_u64().expect("integer too large to factor");
    prime_factors(n)
}

pub fn is_squarefree(n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Exact divisors m of n with gcd(m, n/m) = 1.
pub fn exact_divisors(n: u64) -> Vec<u64> {
    divisors(n).into_iter().filter(|&m| (n / m).gcd(&m) == 1).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn val(x: &Q, p: u64) -> i64 {
    val_int(x.numer(), p) - val_int(x.denom(), p)
}

pub fn pow_q(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    rational_root(x, 2)
}

/// Exact k-th root of a rational, if one exists (real root, sign allowed for odd k).
pub fn rational_root(x: &Q, k: u32) -> Option<Q> {
    if x.is_zero() {
        return Some(Q::zero());
    }
    if x.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return rational_root(&-x, k).map(|r| -r);
    }
    let n = x.numer().nth_root(k);
    let d = x.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *x.numer() && num_traits::pow(d.clone(), k as usize) == *x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a Q>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Kronecker symbol (m|n), extended to all integer pairs.
pub fn kronecker(m: i128, n: i128) -> i8 {
    const TAB: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let (mut a, mut b) = (m, n);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on
    a = a.rem_euclid(b);
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let mut v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= TAB[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = b % r;
        b = r;
    }
}

/// Kronecker symbol with rational lower argument, extended multiplicatively:
/// (m | a/b) = (m|a)(m|b).
pub fn kronecker_q(m: i128, n: &Q) -> i8 {
    let a = n.numer().to_i128().expect("numerator too large");
    let b = n.denom().to_i128().expect("denominator too large");
    kronecker(m, a) * kronecker(m, b)
}

/// A set of primes, either finite or the complement of a finite set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeSet {
    listed: BTreeSet<u64>,
    cofinite: bool,
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet { listed: BTreeSet::new(), cofinite: false }
    }

    /// The set of all primes.
    pub fn all() -> Self {
        PrimeSet { listed: BTreeSet::new(), cofinite: true }
    }

    pub fn of<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        PrimeSet { listed: ps.into_iter().collect(), cofinite: false }
    }

    /// Primes dividing m; every prime when m = 0.
    pub fn dividing(m: i64) -> Self {
        if m == 0 {
            Self::all()
        } else {
            Self::of(prime_factors(m.unsigned_abs()))
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.listed.contains(&p) != self.cofinite
    }

    pub fn complement(&self) -> Self {
        PrimeSet { listed: self.listed.clone(), cofinite: !self.cofinite }
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        PrimeSet {
            listed: self.listed.symmetric_difference(&other.listed).copied().collect(),
            cofinite: self.cofinite != other.cofinite,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.listed.is_empty()
    }

    /// Members among the given candidate primes.
    pub fn restrict(&self, candidates: &[u64]) -> Vec<u64> {
        candidates.iter().copied().filter(|&p| self.contains(p)).collect()
    }

    /// Π-part of a nonzero rational: the product of p^{v_p(x)} over p in the set.
    pub fn part(&self, x: &Q) -> Q {
        let mut primes = prime_factors_big(x.numer());
        primes.extend(prime_factors_big(x.denom()));
        let mut r = Q::one();
        for p in primes {
            if self.contains(p) {
                r *= pow_q(&q(p as i64), val(x, p));
            }
        }
        r
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "" | "{}" | "empty" => return Ok(Self::empty()),
            "all" | "omega" => return Ok(Self::all()),
            _ => {}
        }
        let mut out = BTreeSet::new();
        for part in s.trim_matches(|c| c == '{' || c == '}').split(',') {
            let p: u64 = part.trim().parse().map_err(|_| format!("bad prime '{part}'"))?;
            if prime_factors(p) != vec![p] {
                return Err(format!("{p} is not prime"));
            }
            out.insert(p);
        }
        Ok(Self::of(out))
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.listed.iter().map(|p| p.to_string()).collect();
        if self.cofinite {
            if body.is_empty() {
                write!(f, "all")
            } else {
                write!(f, "all\\{{{}}}", body.join(","))
            }
        } else {
            write!(f, "{{{}}}", body.join(","))
        }
    }
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let bad = || format!("bad rational '{s}'");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Residue of a rational with odd denominator modulo 2, as 0 or 1.
pub fn parity_2adic(x: &Q) -> Option<u8> {
    if x.denom().is_even() {
        return None;
    }
    // a/b with b odd: a/b ≡ a (mod 2)
    Some(if x.numer().is_odd() { 1 } else { 0 })
}
