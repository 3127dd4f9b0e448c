//! Lattices given by Gram matrices, their duals, Π-duals, shadows, theta
//! series, genus invariants, modularities and even neighbors.
//!
//! All coordinates are row vectors with respect to the lattice's own basis.
//! A sublattice or superlattice is described by a rational matrix whose rows
//! are its basis vectors in those coordinates.

pub mod cyclotomic;
pub mod enumerate;
pub mod genus;
pub mod isometry;
pub mod matrix;
pub mod modularity;
pub mod neighbor;
pub mod trials;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{fmt_q, parity_2adic, parse_q, q, PrimeSet, Q};
use crate::qseries::{QSeries, SeriesError, GRID};
use enumerate::{Enumerator, NormCounts};
use matrix::{congruence, hnf_q, ldl_pivots, q_det, q_inverse, q_mul, q_scale, smith, z_to_q, QMat, ZMat};

pub use genus::{chi_cd, gauss_sum_gamma, genus_data, coset_sum_gamma, rescale_check, GenusData};
pub use isometry::is_isometric;
pub use modularity::{modularity_levels, modularity_witness};
pub use neighbor::even_neighbor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("lattice is not even")]
    NotEven,
    #[error("Gauss sum matched no eighth root of unity ({0})")]
    GaussSumMismatch(String),
    #[error("dimension {0} exceeds the isometry limit of 26")]
    DimensionTooLarge(usize),
    #[error("cd = {cd} is not a multiple of the even level {level}")]
    LevelViolation { cd: i64, level: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
    #[error("malformed lattice data: {0}")]
    Parse(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A positive definite lattice described by its (rational) Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: QMat,
}

/// Serialized form: `{"name": ..., "gram": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeData {
    pub name: String,
    pub gram: Vec<Vec<String>>,
}

impl GramLattice {
    pub fn new(gram: QMat) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        match ldl_pivots(&gram) {
            Some(p) if p.iter().all(|x| x.is_positive()) => Ok(GramLattice { gram }),
            _ => Err(LatticeError::NotPositiveDefinite),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(matrix::q_from_i64(rows))
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, LatticeError> {
        let n = entries.len();
        Self::from_i64(
            &(0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect::<Vec<_>>(),
        )
    }

    /// The standard lattice Z^n.
    pub fn standard(n: usize) -> Self {
        Self::diagonal(&vec![1; n]).expect("identity is positive definite")
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> Q {
        q_det(&self.gram)
    }

    pub fn is_integral(&self) -> bool {
        self.gram.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.dim()).all(|i| self.gram[i][i].to_integer().is_even())
    }

    pub fn inner(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    s += xi * yj * &self.gram[i][j];
                }
            }
        }
        s
    }

    pub fn norm(&self, x: &[Q]) -> Q {
        self.inner(x, x)
    }

    /// √t·L, i.e. the Gram matrix multiplied by t.
    pub fn scaled(&self, t: &Q) -> Self {
        GramLattice { gram: q_scale(&self.gram, t) }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut g = vec![vec![Q::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g[a + i][a + j] = other.gram[i][j].clone();
            }
        }
        GramLattice { gram: g }
    }

    /// Orthogonal direct sum of k copies.
    pub fn power(&self, k: usize) -> Self {
        let mut out = GramLattice { gram: Vec::new() };
        for _ in 0..k {
            out = out.direct_sum(self);
        }
        out
    }

    /// The lattice spanned by the rows of `basis` (coordinates in this lattice's basis).
    pub fn sublattice(&self, basis: &QMat) -> Result<Self, LatticeError> {
        Self::new(congruence(basis, &self.gram))
    }

    /// An LLL-reduced Gram matrix of the same lattice.
    pub fn reduced(&self) -> Self {
        GramLattice { gram: matrix::lll(&self.gram).gram }
    }

    pub fn to_data(&self, name: &str) -> LatticeData {
        LatticeData {
            name: name.to_string(),
            gram: self.gram.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
        }
    }

    pub fn from_data(d: &LatticeData) -> Result<Self, LatticeError> {
        let g = d
            .gram
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(LatticeError::Parse)?;
        Self::new(g)
    }
}

impl fmt::Display for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.gram.iter().map(|r| format!("[{}]", r.iter().map(fmt_q).collect::<Vec<_>>().join(","))).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// A translate `offset + base` of a lattice; the offset is in base coordinates,
/// reduced coordinatewise into [-1/2, 1/2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetLattice {
    pub base: GramLattice,
    pub offset: Vec<Q>,
}

impl CosetLattice {
    pub fn new(base: GramLattice, offset: Vec<Q>) -> Self {
        let half = Q::new(1.into(), 2.into());
        let offset = offset.into_iter().map(|x| &x - (&x + &half).floor()).collect();
        CosetLattice { base, offset }
    }

    pub fn is_lattice(&self) -> bool {
        self.offset.iter().all(|x| x.is_zero())
    }

    pub fn norm_of(&self, x: &[Q]) -> Q {
        let y: Vec<Q> = x.iter().zip(&self.offset).map(|(a, b)| a + b).collect();
        self.base.norm(&y)
    }
}

/// Anything whose vectors can be enumerated: a lattice or a coset.
pub trait PointSet {
    fn gram(&self) -> &QMat;
    fn offset(&self) -> Option<&[Q]>;
}

impl PointSet for GramLattice {
    fn gram(&self) -> &QMat {
        &self.gram
    }
    fn offset(&self) -> Option<&[Q]> {
        None
    }
}

impl PointSet for CosetLattice {
    fn gram(&self) -> &QMat {
        &self.base.gram
    }
    fn offset(&self) -> Option<&[Q]> {
        Some(&self.offset)
    }
}

/// Exact histogram of norms ≤ bound.
pub fn norm_counts<P: PointSet>(p: &P, bound: &Q) -> Result<NormCounts, LatticeError> {
    Enumerator::new(p.gram(), p.offset())?.norm_counts(bound)
}

/// Θ = Σ q^{v·v} over the points, through exponent `order` (grid numerator).
/// Fails with `GridOverflow` if some norm is not a multiple of 1/24.
pub fn theta_series<P: PointSet>(p: &P, order: i64) -> Result<QSeries, LatticeError> {
    let bound = Q::new(BigInt::from(order), BigInt::from(GRID));
    let counts = norm_counts(p, &bound)?;
    let mut terms = Vec::new();
    for (nrm, c) in counts.norms() {
        let e = nrm * q(GRID);
        if !e.is_integer() {
            return Err(SeriesError::GridOverflow(fmt_q(&(e / q(GRID)))).into());
        }
        let e = e.to_integer().to_i64().expect("small exponent");
        if e < order {
            terms.push((e, Q::from_integer(BigInt::from(c))));
        }
    }
    Ok(QSeries::from_terms(terms, order))
}

/// Least nonzero norm, by enumeration up to the smallest reduced basis norm.
pub fn min_norm(l: &GramLattice) -> Q {
    let red = l.reduced();
    let bound = (0..l.dim()).map(|i| red.gram[i][i].clone()).min().unwrap_or_else(Q::zero);
    let counts = norm_counts(&red, &bound).expect("bounded enumeration");
    counts.smallest_above(&Q::new(BigInt::one(), BigInt::from(counts.denom.max(1)))).unwrap_or(bound)
}

/// Least norm of a coset (zero included if the coset is the lattice itself).
pub fn coset_min_norm(c: &CosetLattice) -> Result<Q, LatticeError> {
    // the rounded representative in reduced coordinates gives an exact upper bound
    let red = matrix::lll(&c.base.gram);
    let tinv = q_inverse(&z_to_q(&red.transform)).expect("unimodular transform");
    let o_red = q_mul(&vec![c.offset.clone()], &tinv).remove(0);
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let r: Vec<Q> = o_red.iter().map(|x| x - (x + &half).floor()).collect();
    let bound = GramLattice { gram: red.gram }.norm(&r);
    let counts = norm_counts(c, &bound)?;
    let least = counts.norms().next().map(|(n, _)| n);
    Ok(least.unwrap_or(bound))
}

/// Lattice vectors (integer coordinates) with 0 < norm ≤ bound.
pub fn short_vectors(l: &GramLattice, bound: &Q) -> Result<Vec<(Vec<BigInt>, Q)>, LatticeError> {
    let en = Enumerator::new(&l.gram, None)?;
    let mut out = Vec::new();
    let den = BigInt::from(en.denom());
    en.for_each(bound, |z, nn| {
        if nn > 0 {
            let x = en.to_coords(z).into_iter().map(|c| c.to_integer()).collect();
            out.push((x, Q::new(BigInt::from(nn), den.clone())));
        }
    })?;
    Ok(out)
}

pub fn dual(l: &GramLattice) -> GramLattice {
    GramLattice { gram: q_inverse(&l.gram).expect("positive definite") }
}

fn require_integral(l: &GramLattice) -> Result<(), LatticeError> {
    if l.is_integral() {
        Ok(())
    } else {
        Err(LatticeError::NotIntegral)
    }
}

fn int_gram(l: &GramLattice) -> ZMat {
    l.gram.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect()
}

/// Basis of the Π-dual, as rows in the lattice's coordinates (canonical HNF).
///
/// With U·G·V = D the Smith form of the Gram matrix and f_i the rows of V⁻¹,
/// Λ = ⊕ d_i f_i inside Λ* in dual coordinates, and the Π-dual is ⊕ (d_i/π_i) f_i
/// where π_i is the Π-part of d_i.
pub fn pi_dual_basis(l: &GramLattice, pi: &PrimeSet) -> Result<QMat, LatticeError> {
    require_integral(l)?;
    let n = l.dim();
    if pi.is_empty() {
        return Ok(matrix::q_identity(n));
    }
    let ginv = q_inverse(&l.gram).expect("positive definite");
    if *pi == PrimeSet::all() {
        return Ok(ginv);
    }
    let (_, d, v) = smith(&int_gram(l));
    let vinv = q_inverse(&z_to_q(&v)).expect("unimodular");
    let rows: QMat = (0..n)
        .map(|i| {
            let di = Q::from_integer(d[i].clone());
            let s = &di / pi.part(&di);
            vinv[i].iter().map(|x| x * &s).collect()
        })
        .collect();
    Ok(hnf_q(&q_mul(&rows, &ginv)))
}

pub fn pi_dual(l: &GramLattice, pi: &PrimeSet) -> Result<GramLattice, LatticeError> {
    if *pi == PrimeSet::all() {
        require_integral(l)?;
        return Ok(dual(l));
    }
    let b = pi_dual_basis(l, pi)?;
    l.sublattice(&b)
}

/// det_Π: the Π-part of the determinant.
pub fn det_pi(l: &GramLattice, pi: &PrimeSet) -> Q {
    pi.part(&l.det())
}

/// Smallest l with √l·Λ* integral.
pub fn level(l: &GramLattice) -> Result<u64, LatticeError> {
    require_integral(l)?;
    let ginv = dual(l).gram;
    Ok(crate::arith::lcm_denominators(ginv.iter().flatten()).to_u64().expect("level fits in u64"))
}

/// Smallest l with √l·Λ* even; None for odd lattices.
pub fn even_level(l: &GramLattice) -> Result<Option<u64>, LatticeError> {
    require_integral(l)?;
    if !l.is_even() {
        return Ok(None);
    }
    let ginv = dual(l).gram;
    let half = Q::new(1.into(), 2.into());
    let diag: Vec<Q> = (0..l.dim()).map(|i| &ginv[i][i] * &half).collect();
    let lv = crate::arith::lcm_denominators(ginv.iter().flatten().chain(diag.iter()));
    Ok(Some(lv.to_u64().expect("level fits in u64")))
}

/// Π-level: smallest l with √l·Λ^{*Π} integral.
pub fn pi_level(l: &GramLattice, pi: &PrimeSet) -> Result<u64, LatticeError> {
    let p = pi_dual(l, pi)?;
    Ok(crate::arith::lcm_denominators(p.gram.iter().flatten()).to_u64().expect("level fits in u64"))
}

/// Basis of the even sublattice Λ₀ (rows in Λ coordinates).
pub fn even_sublattice_basis(l: &GramLattice) -> Result<QMat, LatticeError> {
    require_integral(l)?;
    let n = l.dim();
    let odd: Vec<bool> = (0..n).map(|i| l.gram[i][i].to_integer().is_odd()).collect();
    let mut b = matrix::q_identity(n);
    let Some(i0) = odd.iter().position(|&o| o) else {
        return Ok(b);
    };
    for i in 0..n {
        if i == i0 {
            b[i][i] = q(2);
        } else if odd[i] {
            b[i][i0] = q(-1);
        }
    }
    Ok(b)
}

pub fn even_sublattice(l: &GramLattice) -> Result<GramLattice, LatticeError> {
    let b = even_sublattice_basis(l)?;
    l.sublattice(&b)
}

/// Characteristic coset S(M) = c/2 + M* for a 2-integral M, returned as base
/// Gram G⁻¹ (the dual basis) with offset c/2; c_i is the 2-adic parity of G_ii.
fn char_coset(g: &QMat) -> Result<CosetLattice, LatticeError> {
    let n = g.len();
    let offset = (0..n)
        .map(|i| parity_2adic(&g[i][i]).map(|c| Q::new(BigInt::from(c), BigInt::from(2))))
        .collect::<Option<Vec<_>>>()
        .ok_or(LatticeError::NotIntegral)?;
    let base = GramLattice::new(q_inverse(&g.to_vec()).expect("positive definite"))?;
    Ok(CosetLattice::new(base, offset))
}

/// The shadow S(Λ): Λ* for even Λ, otherwise the nontrivial coset (Λ₀)* \ Λ*.
pub fn shadow(l: &GramLattice) -> Result<CosetLattice, LatticeError> {
    require_integral(l)?;
    char_coset(&l.gram)
}

/// The Π-shadow together with the basis of its base lattice Λ^{*Π} in Λ coordinates.
pub fn pi_shadow_with_basis(l: &GramLattice, pi: &PrimeSet) -> Result<(CosetLattice, QMat), LatticeError> {
    require_integral(l)?;
    let comp = pi.complement();
    let bp = pi_dual_basis(l, &comp)?;
    let gp = congruence(&bp, &l.gram);
    let lambda = if pi.contains(2) {
        Q::one()
    } else {
        let l2 = pi_level(l, &PrimeSet::of([2]))?;
        q(l2 as i64)
    };
    // √λ·S(√λ·P) equals c/2 + P* with c the parities of λ·G_P
    let scaled = q_scale(&gp, &lambda);
    let n = l.dim();
    let offset = (0..n)
        .map(|i| parity_2adic(&scaled[i][i]).map(|c| Q::new(BigInt::from(c), BigInt::from(2))))
        .collect::<Option<Vec<_>>>()
        .ok_or(LatticeError::NotIntegral)?;
    let gpinv = q_inverse(&gp).expect("positive definite");
    let basis = q_mul(&gpinv, &bp);
    let base = GramLattice::new(gpinv)?;
    Ok((CosetLattice::new(base, offset), basis))
}

pub fn pi_shadow(l: &GramLattice, pi: &PrimeSet) -> Result<CosetLattice, LatticeError> {
    Ok(pi_shadow_with_basis(l, pi)?.0)
}

/// Representatives (integer combinations, in base coordinates) of base / sub,
/// where the rows of `k` give the sublattice in base coordinates.
pub fn quotient_reps(k: &ZMat) -> Vec<Vec<BigInt>> {
    let n = k.len();
    let (_, d, v) = smith(k);
    let vinv = q_inverse(&z_to_q(&v)).expect("unimodular");
    let gens: Vec<Vec<BigInt>> = vinv.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
    let mut reps = vec![vec![BigInt::zero(); n]];
    for i in 0..n {
        let di = d[i].to_u64().expect("small elementary divisor");
        let mut next = Vec::with_capacity(reps.len() * di as usize);
        for r in &reps {
            for t in 0..di {
                let t = BigInt::from(t);
                next.push(r.iter().zip(&gens[i]).map(|(a, g)| a + &t * g).collect());
            }
        }
        reps = next;
    }
    reps
}

/// Norms (in order of enumeration) of representatives of the coset modulo Λ,
/// given the coset and its base basis in Λ coordinates.
pub fn coset_rep_norms(c: &CosetLattice, basis: &QMat) -> Vec<Q> {
    let k = q_inverse(basis).expect("full rank");
    let kz: ZMat = k.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
    debug_assert!(k.iter().flatten().all(|x| x.is_integer()));
    quotient_reps(&kz)
        .into_iter()
        .map(|r| {
            let y: Vec<Q> = r.iter().zip(&c.offset).map(|(a, o)| Q::from_integer(a.clone()) + o).collect();
            c.base.norm(&y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[Vec<i64>]) -> GramLattice {
        GramLattice::from_i64(rows).unwrap()
    }

    #[test]
    fn rejects_indefinite() {
        assert_eq!(GramLattice::from_i64(&[vec![1, 2], vec![2, 1]]), Err(LatticeError::NotPositiveDefinite));
        assert_eq!(GramLattice::from_i64(&[vec![1, 2], vec![1, 1]]), Err(LatticeError::NotSymmetric));
    }

    #[test]
    fn dual_of_e23() {
        let l = lat(&[vec![4, 1], vec![1, 6]]);
        let d = dual(&l);
        assert_eq!(d.gram[0][0], Q::new(6.into(), 23.into()));
        assert_eq!(d.gram[0][1], Q::new((-1).into(), 23.into()));
        assert_eq!(d.det(), Q::new(1.into(), 23.into()));
    }

    #[test]
    fn pi_dual_changes_det_by_pi_part() {
        let c6 = GramLattice::diagonal(&[1, 2, 3, 6]).unwrap();
        let p = pi_dual(&c6, &PrimeSet::of([2])).unwrap();
        assert_eq!(c6.det() / p.det(), q(16));
        assert_eq!(det_pi(&c6, &PrimeSet::of([2])), q(4));
    }

    #[test]
    fn theta_of_z_and_shadow() {
        let z = GramLattice::standard(1);
        let t = theta_series(&z, 10 * GRID).unwrap();
        assert_eq!(t, QSeries::from_int_coeffs(&[1, 2, 0, 0, 2, 0, 0, 0, 0, 2], 10));
        let s = shadow(&z).unwrap();
        let counts = norm_counts(&s, &q(7)).unwrap();
        let norms: Vec<Q> = counts.norms().map(|(n, _)| n).collect();
        assert_eq!(norms, vec![Q::new(1.into(), 4.into()), Q::new(9.into(), 4.into()), Q::new(25.into(), 4.into())]);
    }

    #[test]
    fn levels() {
        let l = GramLattice::diagonal(&[2, 6]).unwrap();
        assert_eq!(even_level(&l).unwrap(), Some(12));
        assert_eq!(level(&l).unwrap(), 6);
        assert_eq!(even_level(&GramLattice::standard(2)).unwrap(), None);
    }

    #[test]
    fn even_sublattice_of_z2() {
        let e = even_sublattice(&GramLattice::standard(2)).unwrap();
        assert!(e.is_even());
        assert_eq!(e.det(), q(4));
    }

    #[test]
    fn min_norms() {
        assert_eq!(min_norm(&lat(&[vec![4, 1], vec![1, 6]])), q(4));
        assert_eq!(min_norm(&lat(&[vec![3, 1], vec![1, 8]])), q(3));
        assert_eq!(min_norm(&GramLattice::standard(3)), q(1));
    }
}
