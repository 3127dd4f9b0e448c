//! The even neighbor Λ″ = (Λ′)′ with Λ′ = √2·(Λ₀)^{*2}, and plain 2-neighbors.

use num_integer::Integer;

use super::matrix::{congruence, q_scale};
use super::{
    even_sublattice, genus::oddity, modularity_levels, pi_dual_basis, pi_shadow, theta_series, GramLattice,
    LatticeError,
};
use crate::arith::{q, PrimeSet, Q};
use crate::qseries::QSeries;

/// One step Λ ↦ √2·(Λ₀)^{*2}; errors if the result is not integral.
pub fn prime_step(l: &GramLattice) -> Result<GramLattice, LatticeError> {
    let l0 = even_sublattice(l)?;
    let b = pi_dual_basis(&l0, &PrimeSet::of([2]))?;
    let next = GramLattice::new(q_scale(&congruence(&b, l0.gram()), &q(2)))?;
    if !next.is_integral() {
        return Err(LatticeError::HypothesisViolation("√2·(Λ₀)^{*2} is not integral".into()));
    }
    Ok(next)
}

/// The even neighbor of an odd {2}-modular lattice whose dimension and
/// oddity are both divisible by 4.
pub fn even_neighbor(l: &GramLattice) -> Result<GramLattice, LatticeError> {
    if !l.is_integral() {
        return Err(LatticeError::HypothesisViolation("lattice is not integral".into()));
    }
    if l.is_even() {
        return Err(LatticeError::HypothesisViolation("lattice is even, not odd".into()));
    }
    if l.dim() % 4 != 0 {
        return Err(LatticeError::HypothesisViolation(format!("dimension {} is not divisible by 4", l.dim())));
    }
    let o = oddity(l)?;
    if o % 4 != 0 {
        return Err(LatticeError::HypothesisViolation(format!("oddity {o} is not divisible by 4")));
    }
    if !modularity_levels(l)?.contains(&2) {
        return Err(LatticeError::HypothesisViolation("lattice has no 2-modularity".into()));
    }
    let l1 = prime_step(l)?;
    let l2 = prime_step(&l1)?;
    Ok(l2.reduced())
}

/// ½{Θ_Λ(z) + Θ_Λ(z+1) + Θ_{S∅}(z) + Θ_{S∅}(z+1)} through `order`.
pub fn neighbor_theta_formula(l: &GramLattice, order: i64) -> Result<QSeries, LatticeError> {
    let t = theta_series(l, order)?;
    let s = theta_series(&pi_shadow(l, &PrimeSet::empty())?, order)?;
    let sum = t.add(&t.shift_z_plus_1()?).add(&s).add(&s.shift_z_plus_1()?);
    Ok(sum.scale(&crate::arith::qr(1, 2)))
}

/// Basis of {u ∈ Λ : u·v ∈ 2Z} for an integral Λ and v ∈ Λ (coordinates).
pub fn even_pairing_sublattice(l: &GramLattice, v: &[Q]) -> Result<super::matrix::QMat, LatticeError> {
    let n = l.dim();
    let gv: Vec<Q> = (0..n).map(|i| l.inner(&unit(n, i), v)).collect();
    let odd: Vec<bool> = gv
        .iter()
        .map(|x| {
            if !x.is_integer() {
                return Err(LatticeError::NotIntegral);
            }
            Ok(x.to_integer().is_odd())
        })
        .collect::<Result<_, _>>()?;
    let Some(k) = odd.iter().position(|&o| o) else {
        return Ok(super::matrix::q_identity(n));
    };
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = unit(n, i);
        if i == k {
            r[i] = q(2);
        } else if odd[i] {
            r[k] = q(1);
        }
        gens.push(r);
    }
    Ok(super::matrix::hnf_q(&gens))
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()
}

/// The two 2-neighbors Λ_v + Z(v/2) and Λ_v + Z(v/2 + u₀), where Λ_v pairs
/// evenly with v and u₀ ∈ Λ pairs oddly with it. Requires v·v ≡ 0 mod 4.
pub fn two_neighbors(l: &GramLattice, v: &[Q]) -> Result<(GramLattice, GramLattice), LatticeError> {
    let vv = l.norm(v);
    if !(&vv / q(4)).is_integer() {
        return Err(LatticeError::HypothesisViolation("v·v is not divisible by 4".into()));
    }
    let n = l.dim();
    let sub = even_pairing_sublattice(l, v)?;
    let u0 = (0..n)
        .map(|i| unit(n, i))
        .find(|e| l.inner(e, v).to_integer().is_odd())
        .ok_or_else(|| LatticeError::HypothesisViolation("v pairs evenly with the whole lattice".into()))?;
    let half: Vec<Q> = v.iter().map(|x| x / q(2)).collect();
    let shifted: Vec<Q> = half.iter().zip(&u0).map(|(a, b)| a + b).collect();
    let build = |extra: Vec<Q>| -> Result<GramLattice, LatticeError> {
        let mut gens = sub.clone();
        gens.push(extra);
        let basis = super::matrix::hnf_q(&gens);
        Ok(l.sublattice(&basis)?.reduced())
    };
    Ok((build(half)?, build(shifted)?))
}
