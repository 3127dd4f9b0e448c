//! Genus invariants: p-excesses, the oddity (through a 2-adic Gauss sum),
//! the Gauss sums γ_Π, their behaviour under rescaling, and the character
//! χ_{c,d} of the theta transformation law.
//!
//! Roots of unity are reported as exponents of ξ = e^{πi/4} modulo 8.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::cyclotomic::Cyclotomic;
use super::{coset_rep_norms, det_pi, even_level, level, pi_dual_basis, pi_shadow_with_basis, CosetLattice};
use super::{matrix::ldl_pivots, GramLattice, LatticeError};
use crate::arith::{fmt_q, kronecker, kronecker_q, prime_factors_big, val, PrimeSet, Q};

fn ser_q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusData {
    pub dim: usize,
    #[serde(serialize_with = "ser_q")]
    pub det: Q,
    pub level: u64,
    pub even_level: Option<u64>,
    pub oddity: u8,
    pub p_excess: BTreeMap<u64, u8>,
    /// γ_p = ξ^{gamma[p]}
    pub gamma: BTreeMap<u64, u8>,
}

fn m8(x: i64) -> u8 {
    x.rem_euclid(8) as u8
}

/// Sign ±1 as a ξ-exponent.
fn sign_exp(s: i8) -> i64 {
    match s {
        1 => 0,
        -1 => 4,
        _ => panic!("Kronecker symbol vanished where coprimality guarantees ±1"),
    }
}

/// Odd primes dividing numerator or denominator of a nonzero rational.
fn odd_primes_of(x: &Q) -> Vec<u64> {
    let mut ps = prime_factors_big(x.numer());
    ps.extend(prime_factors_big(x.denom()));
    ps.sort_unstable();
    ps.dedup();
    ps.retain(|&p| p != 2);
    ps
}

/// p-excess for an odd prime p, from a rational diagonalisation: each entry
/// p^v·u with v odd contributes p − 1, plus 4 when u is a non-residue mod p.
pub fn p_excess(l: &GramLattice, p: u64) -> u8 {
    assert!(p % 2 == 1, "p-excess is defined here for odd p");
    let pivots = ldl_pivots(l.gram()).expect("positive definite");
    let mut total: i64 = 0;
    for a in pivots {
        let v = val(&a, p);
        if v.rem_euclid(2) == 1 {
            total += p as i64 - 1;
            let unit = &a / crate::arith::pow_q(&crate::arith::q(p as i64), v);
            let prod = unit.numer() * unit.denom();
            let r = (prod % BigInt::from(p)).to_i128().expect("small residue");
            if kronecker(r, p as i128) == -1 {
                total += 4;
            }
        }
    }
    m8(total)
}

/// ξ^k as an element of Z[ζ_m] (8 | m).
fn xi_pow(r: &Cyclotomic, k: i64, c: i128) -> Vec<i128> {
    r.monomial(k * (r.order() as i64 / 8), c)
}

/// Σ e^{πi·n} over the given norms, in Z[ζ_m] with m = lcm(8, 2·denominators).
fn exp_sum(norms: &[Q]) -> (Cyclotomic, Vec<i128>) {
    let den = norms.iter().fold(BigInt::from(1), |a, x| a.lcm(x.denom()));
    let m = (BigInt::from(2) * &den).lcm(&BigInt::from(8)).to_usize().expect("small cyclotomic order");
    let r = Cyclotomic::new(m);
    let mut s = r.zero();
    for n in norms {
        // e^{πi a/b} = ζ_m^{a·m/(2b)}
        let k = n * Q::from_integer(BigInt::from(m / 2));
        let k = k.to_integer().mod_floor(&BigInt::from(m)).to_i64().expect("small exponent");
        s[k as usize] += 1;
    }
    (r, s)
}

/// Oddity from a rational diagonalisation: an entry 2^v·u contributes
/// u mod 8, plus 4 when v is odd and u ≡ ±3 (mod 8).
pub fn oddity(l: &GramLattice) -> Result<u8, LatticeError> {
    if !l.is_integral() {
        return Err(LatticeError::NotIntegral);
    }
    let pivots = ldl_pivots(l.gram()).expect("positive definite");
    let mut total: i64 = 0;
    for a in pivots {
        let v = val(&a, 2);
        let unit = &a / crate::arith::pow_q(&crate::arith::q(2), v);
        // u⁻¹ ≡ u (mod 8) for odd u
        let u = ((unit.numer() * unit.denom()) % BigInt::from(8)).to_i64().expect("small residue").rem_euclid(8);
        total += u;
        if v.rem_euclid(2) == 1 && (u == 3 || u == 5) {
            total += 4;
        }
    }
    Ok(m8(total))
}

/// Oddity from the 2-adic Gauss sum Σ_{v ∈ S₂(Λ)/Λ} e^{πi v·v} = det₂^{1/2}·ξ^{oddity}.
/// Sums over det₂ cosets, so only practical for small 2-parts.
pub fn oddity_gauss_sum(l: &GramLattice) -> Result<u8, LatticeError> {
    let (coset, basis) = pi_shadow_with_basis(l, &PrimeSet::of([2]))?;
    let norms = coset_rep_norms(&coset, &basis);
    let (r, s) = exp_sum(&norms);
    let lam = val(&l.det(), 2);
    // det₂^{1/2} = 2^{⌊λ/2⌋}·(ξ + ξ⁻¹)^{λ mod 2}
    let mut root = r.monomial(0, 1i128 << (lam / 2));
    if lam % 2 == 1 {
        let mut s2 = xi_pow(&r, 1, 1);
        r.add_assign(&mut s2, &xi_pow(&r, -1, 1));
        root = r.mul(&root, &s2);
    }
    for k in 0..8 {
        if r.equal(&s, &r.mul(&root, &xi_pow(&r, k, 1))) {
            return Ok(k as u8);
        }
    }
    Err(LatticeError::GaussSumMismatch(format!("2-adic sum over {} cosets", norms.len())))
}

pub fn genus_data(l: &GramLattice) -> Result<GenusData, LatticeError> {
    if !l.is_integral() {
        return Err(LatticeError::NotIntegral);
    }
    let det = l.det();
    let odd = oddity(l)?;
    let mut p_exc = BTreeMap::new();
    let mut gamma = BTreeMap::new();
    gamma.insert(2, odd);
    for p in odd_primes_of(&det) {
        let e = p_excess(l, p);
        p_exc.insert(p, e);
        gamma.insert(p, m8(-(e as i64)));
    }
    Ok(GenusData {
        dim: l.dim(),
        det,
        level: level(l)?,
        even_level: even_level(l)?,
        oddity: odd,
        p_excess: p_exc,
        gamma,
    })
}

impl GenusData {
    /// γ_Π as a ξ-exponent; primes outside 2·det contribute nothing.
    pub fn gamma_of(&self, pi: &PrimeSet) -> u8 {
        m8(self.gamma.iter().filter(|(p, _)| pi.contains(**p)).map(|(_, &g)| g as i64).sum())
    }

    /// The oddity formula: oddity − Σ p-excess ≡ dim (mod 8).
    pub fn satisfies_oddity_formula(&self) -> bool {
        let ex: i64 = self.p_excess.values().map(|&e| e as i64).sum();
        m8(self.oddity as i64 - ex) == m8(self.dim as i64)
    }
}

pub fn gauss_sum_gamma(l: &GramLattice, pi: &PrimeSet) -> Result<u8, LatticeError> {
    Ok(genus_data(l)?.gamma_of(pi))
}

/// γ_Π of an even lattice from the coset sum det_Π^{-1/2} Σ_{Λ^{*Π}/Λ} e^{πi v·v}.
///
/// The square of the sum is compared exactly with det_Π·i^j; the remaining
/// sign of the square root is read off a floating-point evaluation.
pub fn coset_sum_gamma(l: &GramLattice, pi: &PrimeSet) -> Result<u8, LatticeError> {
    if !l.is_even() {
        return Err(LatticeError::NotEven);
    }
    let basis = pi_dual_basis(l, pi)?;
    let base = l.sublattice(&basis)?;
    let norms = coset_rep_norms(&CosetLattice::new(base, vec![Q::zero(); l.dim()]), &basis);
    let dp = det_pi(l, pi);
    let dpi = dp.to_integer().to_i128().expect("small determinant");
    let (r, s) = exp_sum(&norms);
    let sq = r.mul(&s, &s);
    let value = r.eval(&s);
    let root = (dpi as f64).sqrt();
    for j in 0..4 {
        if r.equal(&sq, &xi_pow(&r, 2 * j, dpi)) {
            for k in [j, j + 4] {
                let target = Complex64::from_polar(root, std::f64::consts::PI * k as f64 / 4.0);
                if (value - target).norm() < 1e-6 * root.max(1.0) {
                    return Ok(k as u8);
                }
            }
        }
    }
    Err(LatticeError::GaussSumMismatch(format!("coset sum over {} classes", norms.len())))
}

/// Checks the rescaling law for γ_Π(√t·Λ)/γ_Π(Λ) against its closed form.
pub fn rescale_check(l: &GramLattice, pi: &PrimeSet, t: u64) -> Result<bool, LatticeError> {
    assert!(t > 0);
    let tq = Q::from_integer(BigInt::from(t));
    let lhs = m8(gauss_sum_gamma(&l.scaled(&tq), pi)? as i64 - gauss_sum_gamma(l, pi)? as i64);
    let t1q = pi.part(&tq);
    let t1 = t1q.to_integer().to_i128().expect("small");
    let t2 = t as i128 / t1;
    let det = l.det();
    let dim = l.dim() as i64;
    let det_pi_ = det_pi(l, pi);
    let det_co = det_pi(l, &pi.complement());
    let mut e = sign_exp(kronecker_q(t1, &det_co)) + sign_exp(kronecker_q(t2, &det_pi_));
    if !pi.contains(2) {
        e += dim * sign_exp(kronecker(t2, t1));
        e += sign_exp(kronecker_q(kronecker(-1, t1) as i128, &det));
        e -= (t1 as i64 - 1) * dim;
    } else {
        e += dim * sign_exp(kronecker(t1, t2));
        e += sign_exp(kronecker_q(kronecker(-1, t2) as i128, &det));
        e += (t2 as i64 - 1) * dim;
    }
    Ok(lhs == m8(e))
}

/// χ_{c,d}(Λ) as a ξ-exponent, for an even lattice with cd a multiple of its
/// even level and gcd(c, d) = 1.
pub fn chi_cd(l: &GramLattice, c: i64, d: i64) -> Result<u8, LatticeError> {
    let n = even_level(l)?.ok_or(LatticeError::NotEven)?;
    if (c as i128 * d as i128).rem_euclid(n as i128) != 0 {
        return Err(LatticeError::LevelViolation { cd: c.saturating_mul(d), level: n });
    }
    if c.gcd(&d) != 1 {
        return Err(LatticeError::HypothesisViolation(format!("gcd({c}, {d}) != 1")));
    }
    let g = genus_data(l)?;
    let (pd, pc) = (PrimeSet::dividing(d), PrimeSet::dividing(c));
    let det = &g.det;
    let dim = l.dim() as i64;
    let (c1, d1) = (c as i128, d as i128);
    let mut e = -(g.gamma_of(&pd) as i64);
    e += sign_exp(kronecker_q(c1, &det_pi(l, &pd)));
    e += sign_exp(kronecker_q(d1, &det_pi(l, &pc)));
    if c.rem_euclid(2) == 1 {
        e += dim * sign_exp(kronecker(d1, c1.abs()));
        e += sign_exp(kronecker_q(kronecker(-1, c1) as i128, det));
        e -= (c - 1) * dim;
    } else {
        e += dim * sign_exp(kronecker(c1, d1));
        e += sign_exp(kronecker_q(kronecker(-1, d1) as i128, det));
        e += (d - 1) * dim;
    }
    Ok(m8(e))
}

/// The three-factor form of χ_{c,d} valid when c and d are both odd.
pub fn chi_cd_odd_form(l: &GramLattice, c: i64, d: i64) -> Result<u8, LatticeError> {
    let g = genus_data(l)?;
    let (pd, pc) = (PrimeSet::dividing(d), PrimeSet::dividing(c));
    let mut e = -(g.gamma_of(&pd) as i64);
    e += sign_exp(kronecker_q(c as i128, &det_pi(l, &pd)));
    e += sign_exp(kronecker_q(d as i128, &det_pi(l, &pc)));
    Ok(m8(e))
}

/// Whether a norm is ≡ oddity/4 modulo 2Z₂.
pub fn congruent_to_oddity(norm: &Q, oddity: u8) -> bool {
    let x = norm - Q::new(BigInt::from(oddity), BigInt::from(4));
    x.denom().is_odd() && x.numer().is_even()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_lattices() {
        for n in 1..=9 {
            let g = genus_data(&GramLattice::standard(n)).unwrap();
            assert_eq!(g.oddity as usize, n % 8);
            assert!(g.p_excess.is_empty());
        }
    }

    #[test]
    fn c3_invariants() {
        let c3 = GramLattice::diagonal(&[1, 3]).unwrap();
        let g = genus_data(&c3).unwrap();
        assert_eq!(g.oddity, 4);
        assert_eq!(g.p_excess[&3], 2);
        assert!(g.satisfies_oddity_formula());
        assert_eq!(g.gamma_of(&PrimeSet::of([3])), 6);
        assert_eq!(g.gamma_of(&PrimeSet::all()), 2);
    }

    #[test]
    fn e8_character_trivial() {
        let e8 = crate::constructions::e8();
        for (c, d) in [(1, 0), (1, 1), (2, 3), (-3, 5), (4, -7)] {
            assert_eq!(chi_cd(&e8, c, d).unwrap(), 0);
        }
    }
}
