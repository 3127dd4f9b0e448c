use shadowlat::arith::{q, qr, Q};
use shadowlat::constructions::{catalog, catalog_entries, construction_a_f4, hexacode};
use shadowlat::extremal::{
    bl_coefficient, bl_raw, bound_mu, c2m_sign, critical_dimension, decide, feasibility_check, flagged,
    ln2_nonneg_check, scan, solve_extremal, solve_prescribed, Decision, ExtremalProblem, Family, DEFAULT_ORDER,
};
use shadowlat::lattice::theta_series;
use shadowlat::qseries::{QSeries, GRID};

fn series(terms: &[(i64, Q)], order_q: i64) -> QSeries {
    QSeries::from_terms(terms.iter().map(|(j, c)| (j * GRID, c.clone())), order_q * GRID)
}

#[test]
fn fourteen_dimensional_three_modular_is_infeasible() {
    let p = ExtremalProblem::new(3, 14).unwrap();
    let s = solve_extremal(&p, 4, DEFAULT_ORDER).unwrap();
    assert_eq!(s.c, vec![q(1), q(-14), q(28), q(-56)]);
    let head = s.theta.truncate(7 * GRID);
    assert_eq!(head, series(&[(0, q(1)), (4, q(602)), (5, q(1344)), (6, q(4032))], 7));
    assert_eq!(s.shadow.coeff_q(1), qr(7, 2));
    assert_eq!(s.shadow.coeff_q(3), qr(147, 2));
    assert!(s.shadow.terms().all(|(e, _)| e >= GRID));
    assert_eq!(s.shadow.terms().take_while(|(e, _)| *e < 3 * GRID).count(), 1);
    assert!(!s.verdict.is_feasible());
    assert!(s.verdict.reasons().iter().any(|r| r.contains("shadow coefficient 7/2")));
}

#[test]
fn leech_and_two_modular_eighteen() {
    let leech = solve_extremal(&ExtremalProblem::new(1, 24).unwrap(), 4, DEFAULT_ORDER).unwrap();
    assert!(leech.verdict.is_feasible());
    assert_eq!(leech.theta.coeff_q(4), q(196560));
    let p = ExtremalProblem::new(2, 18).unwrap();
    let s = solve_extremal(&p, 4, DEFAULT_ORDER).unwrap();
    assert!(!s.verdict.is_feasible());
    // the fully prescribed series fails on its own as well
    let plain = solve_prescribed(&p, &[q(1)], DEFAULT_ORDER).unwrap();
    assert!(!feasibility_check(&p, &plain, 4).is_feasible());
}

#[test]
fn shorter_leech_pattern() {
    let p = ExtremalProblem::new(1, 23).unwrap();
    let s = solve_extremal(&p, 3, DEFAULT_ORDER).unwrap();
    assert!(s.verdict.is_feasible(), "{:?}", s.verdict);
    assert_eq!(s.c, vec![q(1), q(-46), q(0)]);
    let head = s.theta.truncate(6 * GRID);
    assert_eq!(head, series(&[(0, q(1)), (3, q(4600)), (4, q(93150)), (5, q(953856))], 6));
    // the shadow starts at norm 15/4, so no shadow vector is shorter than 3/2
    let sh: Vec<(i64, Q)> = s.shadow.terms().take(2).map(|(e, v)| (e, v.clone())).collect();
    assert_eq!(sh, vec![(15 * GRID / 4, q(94208)), (23 * GRID / 4, q(8294400))]);
    assert!(s.shadow.terms().all(|(e, _)| 2 * e >= 3 * GRID));
}

#[test]
fn reconstruction_and_monotonicity() {
    for (nn, n) in [(1, 16), (2, 8), (3, 6), (7, 12), (23, 6)] {
        let p = ExtremalProblem::new(nn, n).unwrap();
        let fam = Family::new(&p, 24).unwrap();
        let s = fam.solve(&[q(1)], p.t as u64 + 1).unwrap();
        assert_eq!(fam.theta(&s.c), s.theta);
        for j in 1..=p.t {
            assert_eq!(s.theta.coeff_q(j as i64), q(0));
        }
        if s.verdict.is_feasible() {
            for mu in 1..s.mu {
                assert!(feasibility_check(&p, &s, mu).is_feasible());
            }
        }
    }
}

#[test]
fn scan_level_two() {
    let rows = scan(2, 34, DEFAULT_ORDER).unwrap();
    assert_eq!(flagged(&rows), vec![2, 6, 18, 34]);
    assert!(rows.iter().all(|r| r.best_mu.is_some()));
}

#[test]
fn scan_level_three() {
    let rows = scan(3, 50, DEFAULT_ORDER).unwrap();
    assert_eq!(flagged(&rows), vec![2, 14, 26, 50]);
    assert!(rows.iter().all(|r| r.best_mu.is_some()));
}

#[test]
fn scan_unimodular() {
    let rows = scan(1, 24, DEFAULT_ORDER).unwrap();
    // every dimension has some candidate minimum
    assert!(rows.iter().all(|r| r.best_mu.is_some()));
    let r23 = rows.iter().find(|r| r.n == 23).unwrap();
    assert!(r23.exceptional);
    assert_eq!((r23.bound, r23.best_mu), (3, Some(3)));
    let r24 = rows.iter().find(|r| r.n == 24).unwrap();
    assert_eq!(r24.best_mu, Some(4));
    // below 12 dimensions only n = 8 reaches the bound of 2
    let at_bound: Vec<u64> = rows.iter().filter(|r| r.n < 12 && r.extremal_feasible).map(|r| r.n).collect();
    assert_eq!(at_bound, vec![8]);
}

#[test]
fn bounds_are_never_three_for_even_levels() {
    for nn in [2, 6, 14] {
        let d = shadowlat::etafunc::dim_c(nn);
        for n in (d..=96).step_by(d as usize) {
            assert_ne!(bound_mu(nn, n).unwrap(), 3);
        }
    }
    for nn in [1, 3, 5, 7, 11, 15, 23] {
        let dn = critical_dimension(nn).unwrap();
        let d = shadowlat::etafunc::dim_c(nn);
        if dn > d {
            assert_eq!(bound_mu(nn, dn - d).unwrap(), 3, "N={nn}");
        }
    }
}

#[test]
fn burmann_lagrange_matches_solve() {
    for nn in shadowlat::etafunc::SUPPORTED_N {
        let d = shadowlat::etafunc::dim_c(nn);
        for n in (d..=48).step_by(d as usize) {
            let p = ExtremalProblem::new(nn, n).unwrap();
            if p.t == 0 {
                continue;
            }
            let s = solve_prescribed(&p, &[q(1)], 16.max(p.t as i64 + 2)).unwrap();
            for i in 1..=p.t {
                assert_eq!(bl_coefficient(&p, i, 16).unwrap(), s.c[i], "N={nn} n={n} i={i}");
            }
        }
    }
    assert_eq!(bl_coefficient(&ExtremalProblem::new(3, 14).unwrap(), 1, 8).unwrap(), q(-14));
}

#[test]
fn c2m_sign_property() {
    for n in 1..=72u64 {
        let c = c2m_sign(n, 16).unwrap();
        if n == 23 {
            assert_eq!(c, q(0));
        } else {
            assert!(c < q(0), "n={n}: c = {c}");
        }
        let m = (n / 24 + 1) as usize;
        assert_eq!(bl_raw(&ExtremalProblem::new(1, n).unwrap(), 2 * m, 16).unwrap(), c, "n={n}");
    }
}

#[test]
fn ln2_in_range() {
    assert!(ln2_nonneg_check(2, 1, 0, 40).unwrap());
    assert!(ln2_nonneg_check(4, 1, 0, 40).unwrap());
    for b in 1..=3u64 {
        for a in 2 * b..=4 * b {
            assert!(ln2_nonneg_check(a, b, 0, 24).unwrap(), "(i) a={a} b={b}");
            for c in 1..=3u64 {
                if a <= 2 * b + c {
                    assert!(ln2_nonneg_check(a, b, c, 24).unwrap(), "(ii) a={a} b={b} c={c}");
                }
            }
        }
    }
}

#[test]
fn ln2_factors_have_nonnegative_log_derivatives() {
    let order = 40 * GRID;
    let b = shadowlat::extremal::shared_basis(2, order + 8 * GRID).unwrap();
    let f1 = b.s1.pow_int(-8).unwrap().mul(&b.s2.pow_int(-2).unwrap()).mul_monomial(2 * GRID);
    let f2 = b.s1.pow_int(-4).unwrap().mul(&b.s2.pow_int(-2).unwrap());
    for f in [f1, f2] {
        let f = f.truncate(order);
        assert!(f.terms().all(|(_, v)| *v >= q(0)));
        let l = f.log_derivative().unwrap();
        assert!(l.order() >= order);
        assert!(l.terms().all(|(_, v)| *v >= q(0)));
    }
}

fn extremal_mu4(level: u64, n: u64, order_q: i64) -> QSeries {
    let p = ExtremalProblem::new(level, n).unwrap();
    let fam = Family::new(&p, order_q).unwrap();
    if p.t + 1 == 4 {
        return fam.solve(&[q(1)], 4).unwrap().theta;
    }
    match decide(&fam, 4).unwrap() {
        Decision::Feasible { branch, solution } => {
            assert_eq!(branch, "even");
            solution.theta
        }
        other => panic!("no μ=4 series for ({level},{n}): {other:?}"),
    }
}

#[test]
fn hexacode_lattice_matches_extremal_series() {
    let k12 = construction_a_f4(&hexacode()).unwrap();
    let th = theta_series(&k12, 13 * GRID).unwrap();
    assert_eq!(th, extremal_mu4(3, 12, 13));
}

#[test]
fn even_catalog_entries_are_extremal() {
    for e in catalog_entries() {
        if e.kind != "E" || e.name == "K12" {
            continue;
        }
        // enumeration depth shrinks with dimension
        let order_q = match e.dim {
            24 => 5,
            16 => 7,
            d if d >= 8 => 11,
            6 => 17,
            4 => 25,
            _ => DEFAULT_ORDER,
        };
        let l = catalog(&e.name).unwrap();
        let th = theta_series(&l, order_q * GRID).unwrap();
        assert_eq!(th, extremal_mu4(e.level, e.dim as u64, order_q), "{}", e.name);
    }
}
