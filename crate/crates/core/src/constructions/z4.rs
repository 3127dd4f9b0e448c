//! Codes over Z/4Z and the unimodular Construction A ½·{v ∈ Zⁿ : v mod 4 ∈ C}.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{span_lattice, ConstructionError};
use crate::arith::{q, qr, Q};
use crate::lattice::matrix::{hnf, ZMat};
use crate::lattice::GramLattice;

/// A Z/4Z-linear code given by generator rows with entries in 0..4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z4Code {
    pub n: usize,
    pub generators: Vec<Vec<u8>>,
}

impl Z4Code {
    pub fn new(generators: Vec<Vec<u8>>) -> Self {
        let n = generators.first().map_or(0, |g| g.len());
        Z4Code { n, generators: generators.into_iter().map(|g| g.into_iter().map(|x| x % 4).collect()).collect() }
    }

    /// The Z-lattice {v ∈ Zⁿ : v mod 4 ∈ C} in Hermite normal form.
    fn lift_basis(&self) -> ZMat {
        let mut gens: ZMat =
            self.generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for i in 0..self.n {
            let mut r = vec![BigInt::from(0); self.n];
            r[i] = BigInt::from(4);
            gens.push(r);
        }
        hnf(&gens)
    }

    /// log₂ |C|, read off from the index of the lifted lattice in Zⁿ.
    pub fn size_log2(&self) -> u32 {
        let b = self.lift_basis();
        let det: BigInt = (0..self.n).map(|i| b[i][i].abs()).product();
        let index_bits = det.bits() as u32 - 1;
        2 * self.n as u32 - index_bits
    }

    pub fn is_self_dual(&self) -> bool {
        let g = &self.generators;
        let orth = g.iter().all(|u| {
            g.iter().all(|v| u.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % 4 == 0)
        });
        orth && self.size_log2() == self.n as u32
    }

    pub fn codewords(&self) -> Vec<Vec<u8>> {
        let mut words = vec![vec![0u8; self.n]];
        for g in &self.generators {
            let mut next = Vec::with_capacity(words.len() * 4);
            for w in &words {
                for k in 0..4u8 {
                    next.push(w.iter().zip(g).map(|(&a, &b)| (a + k * b) % 4).collect::<Vec<u8>>());
                }
            }
            next.sort();
            next.dedup();
            words = next;
        }
        words
    }

    /// Least Euclidean weight (0 ↦ 0, ±1 ↦ 1, 2 ↦ 4) of a nonzero codeword.
    pub fn min_euclidean_weight(&self) -> u32 {
        self.codewords()
            .iter()
            .map(|w| w.iter().map(|&x| [0, 1, 4, 1][x as usize]).sum::<u32>())
            .filter(|&k| k > 0)
            .min()
            .unwrap_or(0)
    }
}

/// The octacode: the Z/4 lift of the extended Hamming code, with all Euclidean weights ≡ 0 mod 8.
pub fn octacode() -> Z4Code {
    Z4Code::new(vec![
        vec![1, 0, 0, 0, 3, 1, 2, 1],
        vec![0, 1, 0, 0, 1, 2, 3, 1],
        vec![0, 0, 1, 0, 3, 3, 3, 2],
        vec![0, 0, 0, 1, 2, 3, 1, 1],
    ])
}

/// {0, 2}: the self-dual code of length 1.
pub fn trivial_code() -> Z4Code {
    Z4Code::new(vec![vec![2]])
}

fn block_four() -> Z4Code {
    Z4Code::new(vec![vec![1, 1, 1, 1], vec![0, 2, 0, 2], vec![0, 0, 2, 2]])
}

fn direct_sum(a: &Z4Code, b: &Z4Code) -> Z4Code {
    let n = a.n + b.n;
    let mut gens = Vec::new();
    for g in &a.generators {
        let mut r = g.clone();
        r.resize(n, 0);
        gens.push(r);
    }
    for g in &b.generators {
        let mut r = vec![0; a.n];
        r.extend_from_slice(g);
        gens.push(r);
    }
    Z4Code { n, generators: gens }
}

/// A random self-dual code of length `n`: a direct sum of self-dual blocks of
/// lengths 1, 4 and 8, with the coordinates permuted and randomly negated.
pub fn random_self_dual<R: Rng>(rng: &mut R, n: usize) -> Z4Code {
    let mut code = Z4Code { n: 0, generators: Vec::new() };
    let mut left = n;
    while left > 0 {
        let choices: Vec<usize> = [1, 4, 8].into_iter().filter(|&k| k <= left).collect();
        let k = *choices.choose(rng).expect("length 1 always fits");
        let block = match k {
            1 => trivial_code(),
            4 => block_four(),
            _ => octacode(),
        };
        code = direct_sum(&code, &block);
        left -= k;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let signs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let generators = code
        .generators
        .iter()
        .map(|g| (0..n).map(|i| if signs[i] { (4 - g[perm[i]]) % 4 } else { g[perm[i]] }).collect())
        .collect();
    Z4Code { n, generators }
}

/// ½·{v ∈ Zⁿ : v mod 4 ∈ C}.
pub fn construction_a_z4(code: &Z4Code) -> Result<GramLattice, ConstructionError> {
    if !code.is_self_dual() {
        return Err(ConstructionError::NotSelfDual("Z/4 code is not self-dual".into()));
    }
    let n = code.n;
    let ambient: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { qr(1, 4) } else { q(0) }).collect()).collect();
    let gens: Vec<Vec<Q>> = code
        .lift_basis()
        .iter()
        .map(|r| r.iter().map(|x| Q::from_integer(BigInt::from(x.to_i64().expect("small")))).collect())
        .collect();
    span_lattice(&gens, &ambient)
}
