use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shadowlat::arith::{prime_factors_big, q, PrimeSet, Q};
use shadowlat::constructions::catalog::bw16;
use shadowlat::constructions::{build_o2, e8};
use shadowlat::lattice::neighbor::neighbor_theta_formula;
use shadowlat::lattice::genus::{congruent_to_oddity, oddity_gauss_sum, gauss_sum_gamma, genus_data, coset_sum_gamma, oddity, rescale_check};
use shadowlat::lattice::{
    dual, even_neighbor, is_isometric, min_norm, modularity_levels, norm_counts, shadow,
    theta_series, GramLattice,
};
use shadowlat::qseries::GRID;

/// Positive definite integral Gram matrix with odd determinant, dim ≤ 6, |entries| ≤ 6.
fn odd_det_lattice(seed: u64) -> GramLattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(1..=6);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = rng.gen_range(1..=6);
            for j in 0..i {
                let v = rng.gen_range(-2..=2);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        if let Ok(l) = GramLattice::from_i64(&g) {
            if l.det().to_integer() % 2u32 != 0u32.into() {
                return l;
            }
        }
    }
}

/// Positive definite even Gram matrix of dim ≤ 4 with small determinant.
fn even_lattice(rng: &mut ChaCha8Rng) -> GramLattice {
    loop {
        let n = rng.gen_range(1..=4);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.gen_range(1..=4);
            for j in 0..i {
                let v = rng.gen_range(-3..=3);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        if let Ok(l) = GramLattice::from_i64(&g) {
            if l.det() <= q(400) {
                return l;
            }
        }
    }
}

fn random_primes(rng: &mut ChaCha8Rng, l: &GramLattice, t: u64) -> PrimeSet {
    let mut cands = prime_factors_big(&l.det().to_integer());
    cands.extend(shadowlat::arith::prime_factors(2 * t));
    cands.sort_unstable();
    cands.dedup();
    PrimeSet::of(cands.into_iter().filter(|_| rng.gen_bool(0.5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shadow_vectors_satisfy_the_oddity_congruence(seed in any::<u64>()) {
        let l = odd_det_lattice(seed);
        let o = oddity(&l).unwrap();
        let s = shadow(&l).unwrap();
        let counts = norm_counts(&s, &q(12)).unwrap();
        for (norm, _) in counts.norms() {
            prop_assert!(congruent_to_oddity(&norm, o), "norm {} oddity {} gram {:?}", norm, o, l.gram());
        }
    }

    #[test]
    fn gauss_sums_agree_and_rescale(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = even_lattice(&mut rng);
        let t = rng.gen_range(1..=30u64);
        let pi = random_primes(&mut rng, &l, t);
        prop_assert_eq!(coset_sum_gamma(&l, &pi).unwrap(), gauss_sum_gamma(&l, &pi).unwrap());
        prop_assert!(rescale_check(&l, &pi, t).unwrap(), "t={} gram {:?}", t, l.gram());
    }

    #[test]
    fn oddity_from_diagonalisation_matches_gauss_sum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = loop {
            let l = odd_det_lattice(rng.gen());
            // scale one basis vector's row and column to bring in 2-adic structure
            let k = rng.gen_range(1..=4i64);
            let mut g = l.gram().clone();
            for j in 0..g.len() {
                g[0][j] *= Q::from_integer(k.into());
                g[j][0] *= Q::from_integer(k.into());
            }
            if let Ok(m) = GramLattice::new(g) {
                if m.det() <= q(4096) {
                    break m;
                }
            }
        };
        prop_assert_eq!(oddity(&l).unwrap(), oddity_gauss_sum(&l).unwrap(), "gram {:?}", l.gram());
    }

    #[test]
    fn oddity_formula_holds(seed in any::<u64>()) {
        let l = odd_det_lattice(seed);
        prop_assert!(genus_data(&l).unwrap().satisfies_oddity_formula());
    }
}

#[test]
fn even_neighbor_is_barnes_wall() {
    let o2 = build_o2().unwrap();
    let en = even_neighbor(&o2).unwrap();
    assert_eq!(en.dim(), 16);
    assert!(en.is_even());
    assert_eq!(min_norm(&en), q(4));
    assert!(modularity_levels(&en).unwrap().contains(&2));
    assert!(is_isometric(&en, &bw16().unwrap()).unwrap().is_some());
    let order = 12 * GRID;
    assert_eq!(theta_series(&en, order).unwrap(), neighbor_theta_formula(&o2, order).unwrap());
}

#[test]
fn e8_theta_and_duality() {
    let l = e8();
    let th = theta_series(&l, 6 * GRID).unwrap();
    assert_eq!((th.coeff_q(2), th.coeff_q(4)), (q(240), q(2160)));
    assert!(is_isometric(&dual(&l), &l).unwrap().is_some());
    let z = GramLattice::standard(2);
    assert_eq!(dual(&z).det(), Q::from_integer(1.into()));
}
