//! Modularities: similarities σ with σ(Λ^{*Π(m)}) = Λ multiplying norms by m.
//!
//! A modularity is stored as a rational matrix A acting on row coordinates,
//! with A·G·Aᵀ = m·G and rows of B_m·A forming a basis of Λ, where B_m is the
//! basis of Λ^{*Π(m)}.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::matrix::{congruence, q_det, q_inverse, q_mul, q_scale, z_to_q, QMat};
use super::{is_isometric, level, pi_dual_basis, GramLattice, LatticeError};
use crate::arith::{exact_divisors, q, PrimeSet, Q};

/// A similarity of level m mapping Λ^{*Π(m)} onto Λ, if one exists.
pub fn modularity_witness(l: &GramLattice, m: u64) -> Result<Option<QMat>, LatticeError> {
    let b = pi_dual_basis(l, &PrimeSet::dividing(m as i64))?;
    let scaled = GramLattice::new(q_scale(&congruence(&b, l.gram()), &q(m as i64)))?;
    let Some(x) = is_isometric(&scaled, l)? else {
        return Ok(None);
    };
    Ok(Some(q_mul(&q_inverse(&b).expect("full rank"), &z_to_q(&x))))
}

/// Check that A is an m-modularity of Λ.
pub fn is_modularity(l: &GramLattice, m: u64, a: &QMat) -> Result<bool, LatticeError> {
    let g = l.gram();
    if congruence(a, g) != q_scale(g, &q(m as i64)) {
        return Ok(false);
    }
    let b = pi_dual_basis(l, &PrimeSet::dividing(m as i64))?;
    let img = q_mul(&b, a);
    Ok(img.iter().flatten().all(|x| x.is_integer()) && q_det(&img).abs().is_one())
}

/// Compose modularities of levels m1 and m2 into one of level m1·m2/gcd².
pub fn compose(m1: u64, a1: &QMat, m2: u64, a2: &QMat) -> (u64, QMat) {
    let g = m1.gcd(&m2);
    let m = m1 * m2 / (g * g);
    (m, q_scale(&q_mul(a1, a2), &Q::new(BigInt::one(), BigInt::from(g))))
}

/// Levels m ∥ level(Λ) for which Λ admits an m-modularity.
pub fn modularity_levels(l: &GramLattice) -> Result<BTreeSet<u64>, LatticeError> {
    let lv = level(l)?;
    let mut out = BTreeSet::new();
    for m in exact_divisors(lv) {
        if modularity_witness(l, m)?.is_some() {
            out.insert(m);
        }
    }
    Ok(out)
}

/// Strongly N-modular: level divides N and every exact divisor of N is a modularity level.
pub fn is_strongly_modular(l: &GramLattice, n: u64) -> Result<bool, LatticeError> {
    if n % level(l)? != 0 {
        return Ok(false);
    }
    for m in exact_divisors(n) {
        if modularity_witness(l, m)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
