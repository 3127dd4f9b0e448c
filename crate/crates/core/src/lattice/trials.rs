//! Seeded random lattices and the randomized law checks built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::genus::{congruent_to_oddity, gauss_sum_gamma, coset_sum_gamma, oddity, rescale_check};
use super::{norm_counts, shadow, GramLattice, LatticeError};
use crate::arith::{fmt_q, prime_factors, prime_factors_big, q, PrimeSet};

/// Positive definite integral Gram matrix with odd determinant, dim ≤ 6,
/// diagonal in 1..=6 and off-diagonal entries in −2..=2.
pub fn odd_det_lattice<R: Rng>(rng: &mut R) -> GramLattice {
    random_gram(rng, 6, |r| r.gen_range(1..=6), 2, |l| l.det().to_integer() % 2u32 == 1u32.into())
}

/// Positive definite even Gram matrix, dim ≤ 4, determinant ≤ 400.
pub fn even_lattice<R: Rng>(rng: &mut R) -> GramLattice {
    random_gram(rng, 4, |r| 2 * r.gen_range(1..=4), 3, |l| l.det() <= q(400))
}

fn random_gram<R: Rng>(
    rng: &mut R,
    max_dim: usize,
    diag: impl Fn(&mut R) -> i64,
    off: i64,
    accept: impl Fn(&GramLattice) -> bool,
) -> GramLattice {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = diag(rng);
            for j in 0..i {
                let v = rng.gen_range(-off..=off);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        if let Ok(l) = GramLattice::from_i64(&g) {
            if accept(&l) {
                return l;
            }
        }
    }
}

/// A random subset of the primes dividing 2·det·t.
pub fn prime_subset<R: Rng>(rng: &mut R, l: &GramLattice, t: u64) -> PrimeSet {
    let mut cands = prime_factors_big(&l.det().to_integer());
    cands.extend(prime_factors(2 * t));
    cands.sort_unstable();
    cands.dedup();
    PrimeSet::of(cands.into_iter().filter(|_| rng.gen_bool(0.5)))
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialFailure {
    pub case: usize,
    pub gram: Vec<Vec<String>>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub law: &'static str,
    pub cases: usize,
    pub failures: Vec<TrialFailure>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn gram_strings(l: &GramLattice) -> Vec<Vec<String>> {
    l.gram().iter().map(|r| r.iter().map(fmt_q).collect()).collect()
}

/// Shadow vectors of norm ≤ `bound` lie in oddity/4 + 2Z₂.
pub fn check_shadow_law(l: &GramLattice, bound: i64) -> Result<Option<String>, LatticeError> {
    let o = oddity(l)?;
    let counts = norm_counts(&shadow(l)?, &q(bound))?;
    let bad = counts.norms().find(|(n, _)| !congruent_to_oddity(n, o)).map(|(n, _)| format!("norm {} with oddity {o}", fmt_q(&n)));
    Ok(bad)
}

pub fn shadow_law_trials(cases: usize, bound: i64, seed: u64) -> Result<TrialReport, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let l = odd_det_lattice(&mut rng);
        if let Some(detail) = check_shadow_law(&l, bound)? {
            failures.push(TrialFailure { case, gram: gram_strings(&l), detail });
        }
    }
    Ok(TrialReport { law: "shadow-law", cases, failures })
}

/// The coset-sum Gauss sum agrees with the local formula, and the rescaling law holds for t.
pub fn check_gauss_sums(l: &GramLattice, pi: &PrimeSet, t: u64) -> Result<Option<String>, LatticeError> {
    if l.is_even() {
        let (direct, local) = (coset_sum_gamma(l, pi)?, gauss_sum_gamma(l, pi)?);
        if direct != local {
            return Ok(Some(format!("γ from the coset sum is ξ^{direct}, local product ξ^{local}")));
        }
    }
    Ok((!rescale_check(l, pi, t)?).then(|| format!("rescaling by t = {t} disagrees")))
}

pub fn gauss_sum_trials(cases: usize, seed: u64) -> Result<TrialReport, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let l = even_lattice(&mut rng);
        let t = rng.gen_range(1..=30u64);
        let pi = prime_subset(&mut rng, &l, t);
        if let Some(detail) = check_gauss_sums(&l, &pi, t)? {
            failures.push(TrialFailure { case, gram: gram_strings(&l), detail: format!("{detail} (Π = {pi:?})") });
        }
    }
    Ok(TrialReport { law: "rescale", cases, failures })
}

/// [`check_gauss_sums`] on one lattice for t = 1..=30, each with a seeded random Π.
pub fn gauss_sums_for(l: &GramLattice, seed: u64) -> Result<Option<String>, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 1..=30u64 {
        let pi = prime_subset(&mut rng, l, t);
        if let Some(d) = check_gauss_sums(l, &pi, t)? {
            return Ok(Some(format!("{d} (Π = {pi:?})")));
        }
    }
    Ok(None)
}
