//! Additive codes over F₄ and Construction A into Z[ω]ⁿ.
//!
//! An element a + bω of F₄ is stored as the two bits `a | b << 1`, so addition
//! is XOR and ω² = ω + 1. The trace Tr(x) = x + x² is the ω-bit.

use num_bigint::BigInt;

use super::{span_lattice, ConstructionError};
use crate::arith::{q, qr, Q};
use crate::lattice::matrix::{hnf_q, QMat};
use crate::lattice::GramLattice;

pub type F4 = u8;

pub const ZERO: F4 = 0;
pub const ONE: F4 = 1;
pub const OMEGA: F4 = 2;
pub const OMEGA_BAR: F4 = 3;

pub fn mul(x: F4, y: F4) -> F4 {
    let (a, b) = (x & 1, x >> 1);
    let (c, d) = (y & 1, y >> 1);
    let lo = (a & c) ^ (b & d);
    let hi = (a & d) ^ (b & c) ^ (b & d);
    lo | (hi << 1)
}

pub fn conj(x: F4) -> F4 {
    mul(x, x)
}

pub fn trace(x: F4) -> u8 {
    x >> 1
}

pub fn symbol(x: F4) -> &'static str {
    ["0", "1", "w", "W"][x as usize]
}

pub fn parse_symbol(s: &str) -> Option<F4> {
    match s {
        "0" => Some(ZERO),
        "1" => Some(ONE),
        "w" => Some(OMEGA),
        "W" => Some(OMEGA_BAR),
        _ => None,
    }
}

/// Tr(u·v̄) summed over coordinates.
pub fn trace_inner(u: &[F4], v: &[F4]) -> u8 {
    u.iter().zip(v).fold(0, |acc, (&x, &y)| acc ^ trace(mul(x, conj(y))))
}

/// An additive code: the F₂-span of its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F4AdditiveCode {
    pub n: usize,
    pub generators: Vec<Vec<F4>>,
}

impl F4AdditiveCode {
    pub fn new(generators: Vec<Vec<F4>>) -> Self {
        let n = generators.first().map_or(0, |g| g.len());
        F4AdditiveCode { n, generators }
    }

    /// Row-reduced F₂ basis of the span.
    pub fn basis(&self) -> Vec<Vec<F4>> {
        // view each word as 2n bits and eliminate
        let mut rows: Vec<Vec<u8>> = self.generators.iter().map(|g| to_bits(g)).collect();
        let mut basis = Vec::new();
        let width = 2 * self.n;
        for col in 0..width {
            let Some(p) = rows.iter().position(|r| r[col] == 1) else { continue };
            let piv = rows.swap_remove(p);
            for r in rows.iter_mut() {
                if r[col] == 1 {
                    r.iter_mut().zip(&piv).for_each(|(a, b)| *a ^= b);
                }
            }
            basis.push(piv);
        }
        basis.into_iter().map(|b| from_bits(&b)).collect()
    }

    pub fn size_log2(&self) -> usize {
        self.basis().len()
    }

    pub fn codewords(&self) -> Vec<Vec<F4>> {
        let basis = self.basis();
        let mut words = vec![vec![ZERO; self.n]];
        for b in &basis {
            let more: Vec<Vec<F4>> =
                words.iter().map(|w| w.iter().zip(b).map(|(x, y)| x ^ y).collect()).collect();
            words.extend(more);
        }
        words
    }

    pub fn is_trace_self_dual(&self) -> bool {
        let gens = &self.generators;
        let orth = gens.iter().all(|u| gens.iter().all(|v| trace_inner(u, v) == 0));
        orth && self.size_log2() == self.n
    }

    /// Smallest Hamming weight of a nonzero codeword.
    pub fn min_distance(&self) -> usize {
        self.codewords()
            .iter()
            .map(|w| w.iter().filter(|&&x| x != ZERO).count())
            .filter(|&k| k > 0)
            .min()
            .unwrap_or(0)
    }

    /// Even: every codeword has even Hamming weight.
    pub fn is_even(&self) -> bool {
        self.codewords().iter().all(|w| w.iter().filter(|&&x| x != ZERO).count() % 2 == 0)
    }
}

fn to_bits(w: &[F4]) -> Vec<u8> {
    w.iter().flat_map(|&x| [x & 1, x >> 1]).collect()
}

fn from_bits(b: &[u8]) -> Vec<F4> {
    b.chunks(2).map(|c| c[0] | (c[1] << 1)).collect()
}

/// The hexacode: words (a, b, c, φ(1), φ(ω), φ(ω̄)) with φ(x) = ax² + bx + c.
pub fn hexacode() -> F4AdditiveCode {
    let mut gens = Vec::new();
    for i in 0..3 {
        for s in [ONE, OMEGA] {
            let mut abc = [ZERO; 3];
            abc[i] = s;
            let phi = |x: F4| mul(abc[0], mul(x, x)) ^ mul(abc[1], x) ^ abc[2];
            gens.push(vec![abc[0], abc[1], abc[2], phi(ONE), phi(OMEGA), phi(OMEGA_BAR)]);
        }
    }
    F4AdditiveCode::new(gens)
}

/// All cyclic shifts of 1ω1000.
pub fn odd_hexacode() -> F4AdditiveCode {
    let seed = [ONE, OMEGA, ONE, ZERO, ZERO, ZERO];
    F4AdditiveCode::new((0..6).map(|s| (0..6).map(|i| seed[(i + 6 - s) % 6]).collect()).collect())
}

/// Shorten at `coord`: keep codewords whose entry there is 0 or `keep`, then delete it.
pub fn shorten(code: &F4AdditiveCode, coord: usize, keep: F4) -> F4AdditiveCode {
    let words: Vec<Vec<F4>> = code
        .codewords()
        .into_iter()
        .filter(|w| w[coord] == ZERO || w[coord] == keep)
        .map(|mut w| {
            w.remove(coord);
            w
        })
        .collect();
    let c = F4AdditiveCode { n: code.n - 1, generators: words };
    F4AdditiveCode { n: c.n, generators: c.basis() }
}

/// The self-dual (5, 3) code obtained by shortening the hexacode.
pub fn shorter_hexacode() -> F4AdditiveCode {
    let hex = hexacode();
    for keep in [ONE, OMEGA, OMEGA_BAR] {
        let c = shorten(&hex, 0, keep);
        if c.is_trace_self_dual() && c.min_distance() == 3 {
            return c;
        }
    }
    unreachable!("the shortened hexacode is a (5,3) self-dual code")
}

/// Real form of {u ∈ Z[ω]ⁿ : u mod 2 ∈ C}, coordinates (1, ω) per entry.
pub fn construction_a_f4(code: &F4AdditiveCode) -> Result<GramLattice, ConstructionError> {
    let (gens, ambient) = construction_a_f4_embedded(code)?;
    span_lattice(&gens, &ambient)
}

/// Hermite basis of the Construction A lattice inside Z[ω]ⁿ ≅ Z²ⁿ, together
/// with the ambient Gram matrix (blocks [[1, −1/2], [−1/2, 1]]).
pub fn construction_a_f4_embedded(code: &F4AdditiveCode) -> Result<(QMat, QMat), ConstructionError> {
    if !code.is_trace_self_dual() {
        return Err(ConstructionError::NotSelfDual("F4 code is not trace self-dual".into()));
    }
    let n = code.n;
    let mut ambient = vec![vec![Q::from_integer(BigInt::from(0)); 2 * n]; 2 * n];
    for i in 0..n {
        ambient[2 * i][2 * i] = q(1);
        ambient[2 * i + 1][2 * i + 1] = q(1);
        ambient[2 * i][2 * i + 1] = qr(-1, 2);
        ambient[2 * i + 1][2 * i] = qr(-1, 2);
    }
    let mut gens: Vec<Vec<Q>> =
        code.generators.iter().map(|g| to_bits(g).into_iter().map(|b| q(b as i64)).collect()).collect();
    for i in 0..2 * n {
        let mut r = vec![q(0); 2 * n];
        r[i] = q(2);
        gens.push(r);
    }
    Ok((hnf_q(&gens), ambient))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        assert_eq!(mul(OMEGA, OMEGA), OMEGA_BAR);
        assert_eq!(mul(OMEGA, OMEGA_BAR), ONE);
        assert_eq!(conj(OMEGA), OMEGA_BAR);
        assert_eq!(trace(ONE), 0);
        assert_eq!(trace(OMEGA), 1);
        assert_eq!(trace(OMEGA_BAR), 1);
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    assert_eq!(mul(x, y ^ z), mul(x, y) ^ mul(x, z));
                }
            }
        }
    }

    #[test]
    fn hexacode_family_parameters() {
        let h = hexacode();
        assert!(h.is_trace_self_dual());
        assert_eq!((h.n, h.min_distance()), (6, 4));
        assert!(h.is_even());
        let o = odd_hexacode();
        assert!(o.is_trace_self_dual());
        assert_eq!((o.n, o.min_distance()), (6, 3));
        assert!(!o.is_even());
        let s = shorter_hexacode();
        assert_eq!((s.n, s.min_distance()), (5, 3));
    }

    #[test]
    fn rejects_non_self_dual() {
        let c = F4AdditiveCode::new(vec![vec![ONE, ZERO]]);
        assert!(matches!(construction_a_f4(&c), Err(ConstructionError::NotSelfDual(_))));
    }
}
