//! Isometry testing by backtracking over short vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::enumerate::Enumerator;
use super::matrix::{lll, q_inverse, q_to_z, z_mul, z_to_q, ZMat};
use super::{GramLattice, LatticeError};
use crate::arith::Q;

pub const MAX_DIM: usize = 26;

fn scaled_int(g: &[Vec<Q>], den: &BigInt) -> Vec<Vec<i128>> {
    g.iter()
        .map(|r| r.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer().to_i128().expect("small")).collect())
        .collect()
}

/// Decide whether `a` and `b` are isometric. On success returns X with
/// X·G_b·Xᵀ = G_a: the rows of X are the images of a's basis, in b's coordinates.
pub fn is_isometric(a: &GramLattice, b: &GramLattice) -> Result<Option<ZMat>, LatticeError> {
    let n = a.dim();
    if n > MAX_DIM || b.dim() > MAX_DIM {
        return Err(LatticeError::DimensionTooLarge(n.max(b.dim())));
    }
    if n != b.dim() || a.det() != b.det() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let ra = lll(a.gram());
    let rb = lll(b.gram());
    let bound = (0..n).map(|i| ra.gram[i][i].clone()).max().expect("nonempty");
    // norm profiles up to the longest reduced basis vector must agree
    let ea = Enumerator::new(&ra.gram, None)?;
    let eb = Enumerator::new(&rb.gram, None)?;
    let ca: Vec<(Q, u64)> = ea.norm_counts(&bound)?.norms().collect();
    let cb: Vec<(Q, u64)> = eb.norm_counts(&bound)?.norms().collect();
    if ca != cb {
        return Ok(None);
    }
    // candidate images grouped by norm, in rb coordinates
    let den = ra.gram.iter().chain(rb.gram.iter()).flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ma = scaled_int(&ra.gram, &den);
    let mb = scaled_int(&rb.gram, &den);
    let mut by_norm: BTreeMap<i128, Vec<(Vec<i128>, Vec<i128>)>> = BTreeMap::new();
    eb.for_each(&bound, |z, _| {
        let x: Vec<i128> = eb.to_coords(z).iter().map(|c| c.to_integer().to_i128().expect("small")).collect();
        if x.iter().all(|&v| v == 0) {
            return;
        }
        let xm: Vec<i128> = (0..n).map(|j| (0..n).map(|i| x[i] * mb[i][j]).sum()).collect();
        let nn: i128 = (0..n).map(|i| x[i] * xm[i]).sum();
        by_norm.entry(nn).or_default().push((x, xm));
    })?;
    let empty = Vec::new();
    let cands: Vec<&Vec<(Vec<i128>, Vec<i128>)>> =
        (0..n).map(|i| by_norm.get(&ma[i][i]).unwrap_or(&empty)).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    if !search(0, &cands, &ma, &mut chosen) {
        return Ok(None);
    }
    let w: ZMat =
        chosen.iter().enumerate().map(|(i, &k)| cands[i][k].0.iter().map(|&v| BigInt::from(v)).collect()).collect();
    // X = T_a⁻¹ · W · T_b
    let ta_inv = q_to_z(&q_inverse(&z_to_q(&ra.transform)).expect("unimodular")).expect("integral inverse");
    let x = z_mul(&z_mul(&ta_inv, &w), &rb.transform);
    Ok(Some(x))
}

fn search(
    i: usize,
    cands: &[&Vec<(Vec<i128>, Vec<i128>)>],
    target: &[Vec<i128>],
    chosen: &mut Vec<usize>,
) -> bool {
    if i == cands.len() {
        return true;
    }
    'next: for (k, (_, xm)) in cands[i].iter().enumerate() {
        for (j, &cj) in chosen.iter().enumerate() {
            let y = &cands[j][cj].0;
            let ip: i128 = y.iter().zip(xm).map(|(a, b)| a * b).sum();
            if ip != target[i][j] {
                continue 'next;
            }
        }
        chosen.push(k);
        if search(i + 1, cands, target, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::{congruence, q_from_i64};

    #[test]
    fn witness_is_an_isometry() {
        let a = GramLattice::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let b = GramLattice::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let x = is_isometric(&a, &b).unwrap().unwrap();
        assert_eq!(congruence(&z_to_q(&x), b.gram()), *a.gram());
    }

    #[test]
    fn different_lattices() {
        let a = GramLattice::standard(2);
        let b = GramLattice::diagonal(&[1, 2]).unwrap();
        assert_eq!(is_isometric(&a, &b).unwrap(), None);
        let c = GramLattice::new(q_from_i64(&[vec![1, 0], vec![0, 4]])).unwrap();
        let d = GramLattice::new(q_from_i64(&[vec![2, 0], vec![0, 2]])).unwrap();
        assert_eq!(is_isometric(&c, &d).unwrap(), None);
    }

    #[test]
    fn dimension_limit() {
        let big = GramLattice::standard(27);
        assert_eq!(is_isometric(&big, &big), Err(LatticeError::DimensionTooLarge(27)));
    }
}
