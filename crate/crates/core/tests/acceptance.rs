//! One pass/fail line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use shadowlat::analytic::{transform_suite, verify_atkin_lehner, verify_shadow_transform, TOLERANCE};
use shadowlat::arith::{q, qr, Q};
use shadowlat::constructions::catalog::bw16;
use shadowlat::constructions::{
    build_o2, catalog, catalog_entries, construction_a_f4, e8, hexacode, odd_hexacode, shorter_hexacode,
};
use shadowlat::etafunc::{critical_dimension, dim_c, verify_identity, Identity, SUPPORTED_N};
use shadowlat::extremal::{
    bl_coefficient, bl_raw, bound_mu, c2m_sign, decide, flagged, scan, solve_extremal, solve_prescribed, Decision,
    ExtremalProblem, Family, DEFAULT_ORDER,
};
use shadowlat::lattice::genus::oddity;
use shadowlat::lattice::modularity::is_strongly_modular;
use shadowlat::lattice::neighbor::neighbor_theta_formula;
use shadowlat::lattice::trials::{gauss_sum_trials, shadow_law_trials};
use shadowlat::lattice::{even_neighbor, is_isometric, min_norm, modularity_levels, theta_series, GramLattice};
use shadowlat::qseries::{QSeries, GRID};

const SEED: u64 = 20240601;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn series(terms: &[(i64, Q)], order_q: i64) -> QSeries {
    QSeries::from_terms(terms.iter().map(|(j, c)| (j * GRID, c.clone())), order_q * GRID)
}

fn regression_3_14() -> Check {
    let p = ExtremalProblem::new(3, 14).map_err(err)?;
    let s = solve_extremal(&p, 4, DEFAULT_ORDER).map_err(err)?;
    ensure(s.c == vec![q(1), q(-14), q(28), q(-56)], format!("c = {:?}", s.report().c))?;
    let head = series(&[(0, q(1)), (4, q(602)), (5, q(1344)), (6, q(4032))], 7);
    ensure(s.theta.truncate(7 * GRID) == head, format!("theta head {}", s.theta.truncate(7 * GRID)))?;
    let first: Vec<(i64, Q)> = s.shadow.terms().take(2).map(|(e, v)| (e, v.clone())).collect();
    ensure(first == vec![(GRID, qr(7, 2)), (3 * GRID, qr(147, 2))], format!("shadow head {first:?}"))?;
    ensure(!s.verdict.is_feasible(), "verdict is not Infeasible")
}

fn identity_suite() -> Check {
    let order = 48 * GRID;
    let mut runs: Vec<(Identity, u64)> = Vec::new();
    for n in [1, 3, 5, 7, 11, 15, 23] {
        runs.extend(Identity::for_level(n).into_iter().map(|i| (i, n)));
    }
    runs.extend(Identity::for_level(2).into_iter().map(|i| (i, 2)));
    runs.push((Identity::Z4Eta, 1));
    ensure(runs.len() == 7 * 8 + 6 + 1, format!("{} identity instances", runs.len()))?;
    for (id, n) in runs {
        let r = verify_identity(id, n, order).map_err(err)?;
        ensure(r.holds, format!("{} at N={n}: {:?}", r.identity, r.discrepancy))?;
    }
    Ok(())
}

fn bound_function() -> Check {
    for n in 1..=96u64 {
        let expect = if n == 23 { 3 } else { 2 * (n / 24) + 2 };
        ensure(bound_mu(1, n).map_err(err)? == expect, format!("N=1 n={n}"))?;
    }
    for nn in SUPPORTED_N {
        let (d, dn) = (dim_c(nn), critical_dimension(nn).map_err(err)?);
        for n in (d..=96).step_by(d as usize) {
            let expect = if nn % 2 == 1 && n + d == dn { 3 } else { 2 * (n / dn) + 2 };
            ensure(bound_mu(nn, n).map_err(err)? == expect, format!("N={nn} n={n}"))?;
        }
    }
    for (nn, n, b) in [(1, 23, 3), (1, 24, 4), (1, 48, 6), (2, 16, 4), (3, 10, 3), (23, 2, 4)] {
        ensure(bound_mu(nn, n).map_err(err)? == b, format!("spot ({nn},{n})"))?;
    }
    Ok(())
}

fn existence_scans() -> Check {
    let two = flagged(&scan(2, 34, DEFAULT_ORDER).map_err(err)?);
    ensure(two == vec![2, 6, 18, 34], format!("scan(2,34) flags {two:?}"))?;
    let three = flagged(&scan(3, 50, DEFAULT_ORDER).map_err(err)?);
    ensure(three == vec![2, 14, 26, 50], format!("scan(3,50) flags {three:?}"))
}

fn catalog_verification() -> Check {
    for e in catalog_entries() {
        let l = catalog(&e.name).map_err(err)?;
        let m = min_norm(&l);
        let want = match e.kind.as_str() {
            "E" => Some(4),
            "O" | "S" => Some(3),
            _ => None,
        };
        if let Some(w) = want {
            ensure(m == q(w), format!("{}: min {m}", e.name))?;
        }
        ensure(m == q(e.min as i64), format!("{}: min {m} vs listed {}", e.name, e.min))?;
        ensure(is_strongly_modular(&l, e.level).map_err(err)?, format!("{} not strongly {}-modular", e.name, e.level))?;
        if e.level == 7 || e.level == 23 {
            ensure(oddity(&l).map_err(err)? == 0, format!("{}: oddity", e.name))?;
        }
    }
    Ok(())
}

fn construction_a() -> Check {
    let k12 = construction_a_f4(&hexacode()).map_err(err)?;
    ensure(k12.dim() == 12 && min_norm(&k12) == q(4), "hexacode lattice shape")?;
    ensure(modularity_levels(&k12).map_err(err)?.contains(&3), "hexacode lattice is not 3-modular")?;
    let th = theta_series(&k12, 13 * GRID).map_err(err)?;
    let p = ExtremalProblem::new(3, 12).map_err(err)?;
    let fam = Family::new(&p, 13).map_err(err)?;
    let ext = if p.t + 1 == 4 {
        fam.solve(&[q(1)], 4).map_err(err)?.theta
    } else {
        match decide(&fam, 4).map_err(err)? {
            Decision::Feasible { solution, .. } => solution.theta,
            other => return Err(format!("no extremal (3,12) series: {other:?}")),
        }
    };
    ensure(th == ext, "hexacode theta differs from the extremal series")?;
    let o = construction_a_f4(&odd_hexacode()).map_err(err)?;
    let s = construction_a_f4(&shorter_hexacode()).map_err(err)?;
    ensure((o.dim(), min_norm(&o)) == (12, q(3)), "odd hexacode lattice")?;
    ensure((s.dim(), min_norm(&s)) == (10, q(3)), "shorter hexacode lattice")
}

fn shadow_law() -> Check {
    let r = shadow_law_trials(200, 12, SEED).map_err(err)?;
    ensure(r.passed() && r.cases == 200, format!("{} failures, first {:?}", r.failures.len(), r.failures.first()))
}

fn gauss_sums() -> Check {
    let r = gauss_sum_trials(200, SEED).map_err(err)?;
    ensure(r.passed() && r.cases == 200, format!("{} failures, first {:?}", r.failures.len(), r.failures.first()))
}

fn transformation_laws() -> Check {
    let sqrt2_c3 = GramLattice::diagonal(&[2, 6]).map_err(err)?;
    let e23 = catalog("E23").map_err(err)?;
    for (name, l) in [("E8", e8()), ("sqrt2 C3", sqrt2_c3.clone()), ("E23", e23.clone())] {
        let reports = transform_suite(&l, 20, SEED).map_err(err)?;
        let level = reports.iter().filter(|r| r.law == "level").count();
        ensure(level == 20, format!("{name}: {level} level-law matrices"))?;
        if let Some(bad) = reports.iter().find(|r| r.residual >= TOLERANCE) {
            return Err(format!("{name}: {} {:?} residual {:.3e}", bad.law, bad.matrix, bad.residual));
        }
    }
    let e8l = e8();
    for (l, m, s) in [(&sqrt2_c3, 3, [3, 2, 4, 3]), (&e23, 23, [1, 22, 1, 23]), (&e8l, 1, [1, 0, 1, 1])] {
        let r = verify_atkin_lehner(l, m, s).map_err(err)?;
        ensure(r.passed, format!("W_{m} {s:?}: residual {:.3e}", r.residual))?;
    }
    for l in [GramLattice::standard(1), GramLattice::standard(3), e8()] {
        let r = verify_shadow_transform(&l).map_err(err)?;
        ensure(r.passed, format!("shadow law dim {}: residual {:.3e}", l.dim(), r.residual))?;
    }
    Ok(())
}

fn extremal_cross_method() -> Check {
    for nn in SUPPORTED_N {
        let d = dim_c(nn);
        for n in (d..=48).step_by(d as usize) {
            let p = ExtremalProblem::new(nn, n).map_err(err)?;
            if p.t == 0 {
                continue;
            }
            let s = solve_prescribed(&p, &[q(1)], 16.max(p.t as i64 + 2)).map_err(err)?;
            for i in 1..=p.t {
                let bl = bl_coefficient(&p, i, 16).map_err(err)?;
                ensure(bl == s.c[i], format!("N={nn} n={n} i={i}: {bl} vs {}", s.c[i]))?;
            }
        }
    }
    for n in 1..=72u64 {
        let c = c2m_sign(n, 16).map_err(err)?;
        let ok = if n == 23 { c == q(0) } else { c < q(0) };
        ensure(ok, format!("c_2m at n={n} is {c}"))?;
        let m = (n / 24 + 1) as usize;
        let bl = bl_raw(&ExtremalProblem::new(1, n).map_err(err)?, 2 * m, 16).map_err(err)?;
        ensure(bl == c, format!("n={n}: residue formula gives {bl}"))?;
    }
    Ok(())
}

fn even_neighbor_check() -> Check {
    let o2 = build_o2().map_err(err)?;
    let en = even_neighbor(&o2).map_err(err)?;
    ensure(en.dim() == 16 && en.is_even() && min_norm(&en) == q(4), "neighbor shape")?;
    ensure(modularity_levels(&en).map_err(err)?.contains(&2), "neighbor is not 2-modular")?;
    ensure(is_isometric(&en, &bw16().map_err(err)?).map_err(err)?.is_some(), "neighbor is not Barnes-Wall")?;
    let order = 13 * GRID;
    let th = theta_series(&en, order).map_err(err)?;
    ensure(th == neighbor_theta_formula(&o2, order).map_err(err)?, "four-term theta formula fails")
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 11] = [
        ("3-modular dimension 14 regression", regression_3_14),
        ("generator identity suite through q^48", identity_suite),
        ("minimal-norm bound function", bound_function),
        ("existence scans for levels 2 and 3", existence_scans),
        ("catalog minima, strong modularity, oddity", catalog_verification),
        ("Construction A from the hexacode family", construction_a),
        ("shadow congruence on 200 random lattices", shadow_law),
        ("Gauss-sum agreement and rescaling on 200 cases", gauss_sums),
        ("numeric transformation laws", transformation_laws),
        ("residue formula vs triangular solve, c_2m sign", extremal_cross_method),
        ("even neighbor of O2", even_neighbor_check),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
