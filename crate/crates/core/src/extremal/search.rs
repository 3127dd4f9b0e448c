//! Integer search over affine constraints.
//!
//! Variables are rational unknowns; constraints are affine forms a₀ + Σ aᵢxᵢ
//! that must vanish, be nonnegative, be integers, or be even integers.
//! Equalities are eliminated first, the congruences are solved as a lattice,
//! and the lattice coordinates are enumerated one at a time with
//! Fourier–Motzkin bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Q;
use crate::lattice::matrix::{hnf, lll};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Eq,
    Ge,
    Int,
    Even,
}

/// An affine form: `coef[0] + Σ coef[i+1]·x_i`.
pub type Affine = Vec<Q>;

#[derive(Clone, Debug)]
pub struct Constraint {
    pub kind: Kind,
    pub form: Affine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    /// A free variable has no finite bound from the inequalities.
    Unbounded,
    /// The candidate range exceeds the iteration budget.
    TooLarge(u64),
}

const BUDGET: u64 = 2_000_000;
const FM_LIMIT: usize = 50_000;

/// Find one point satisfying every constraint, or None if none exists.
pub fn solve(cons: &[Constraint], nvars: usize) -> Result<Option<Vec<Q>>, SearchError> {
    // expr[i]: x_i as an affine form in the original variables, rewritten as pivots are found
    let mut expr: Vec<Affine> = (0..nvars).map(|i| unit_form(nvars, i)).collect();
    let mut pivoted = vec![false; nvars];
    for c in cons.iter().filter(|c| c.kind == Kind::Eq) {
        let a = subst(&c.form, &expr);
        let Some(p) = (0..nvars).find(|&i| !a[i + 1].is_zero()) else {
            if !a[0].is_zero() {
                return Ok(None);
            }
            continue;
        };
        // x_p = −(a₀ + Σ_{i≠p} aᵢxᵢ)/a_p
        let ap = a[p + 1].clone();
        let mut e: Affine = a.iter().map(|x| -x / &ap).collect();
        e[p + 1] = Q::zero();
        for ex in expr.iter_mut() {
            let cp = ex[p + 1].clone();
            if !cp.is_zero() {
                ex[p + 1] = Q::zero();
                for (t, v) in ex.iter_mut().zip(&e) {
                    *t += &cp * v;
                }
            }
        }
        expr[p] = e;
        pivoted[p] = true;
    }
    let free: Vec<usize> = (0..nvars).filter(|&i| !pivoted[i]).collect();
    // restate the remaining constraints over the free variables
    let restrict = |a: &Affine| -> Affine {
        let r = subst(a, &expr);
        std::iter::once(r[0].clone()).chain(free.iter().map(|&i| r[i + 1].clone())).collect()
    };
    let reduced: Vec<Constraint> = cons
        .iter()
        .filter(|c| c.kind != Kind::Eq)
        .map(|c| Constraint { kind: c.kind, form: restrict(&c.form) })
        .collect();
    let Some(y) = enumerate(&reduced, free.len())? else { return Ok(None) };
    let mut point = vec![Q::zero(); nvars];
    for i in 0..nvars {
        let mut v = expr[i][0].clone();
        for (k, &fi) in free.iter().enumerate() {
            v += &expr[i][fi + 1] * &y[k];
        }
        point[i] = v;
    }
    Ok(Some(point))
}

fn unit_form(n: usize, i: usize) -> Affine {
    (0..=n).map(|j| if j == i + 1 { Q::one() } else { Q::zero() }).collect()
}

fn subst(a: &Affine, expr: &[Affine]) -> Affine {
    let mut r = vec![Q::zero(); a.len()];
    r[0] = a[0].clone();
    for (i, e) in expr.iter().enumerate() {
        let ai = &a[i + 1];
        if !ai.is_zero() {
            for (t, v) in r.iter_mut().zip(e) {
                *t += ai * v;
            }
        }
    }
    r
}

fn holds(kind: Kind, v: &Q) -> bool {
    match kind {
        Kind::Eq => v.is_zero(),
        Kind::Ge => !v.is_negative(),
        Kind::Int => v.is_integer(),
        Kind::Even => v.is_integer() && v.to_integer().is_even(),
    }
}

/// Integer points of the constraint system in `r` variables (variables are
/// integers; the constraints force it via their `Even` forms on the unknowns).
///
/// The Int/Even conditions cut out an affine lattice y = y₀ + Bᵀw. Its basis is
/// LLL-reduced in a metric that rescales each variable by its range, and the
/// inequalities are then enumerated over w.
fn enumerate(cl: &[Constraint], r: usize) -> Result<Option<Vec<Q>>, SearchError> {
    let Some((y0, basis)) = congruence_lattice(cl, r) else { return Ok(None) };
    let ge: Vec<Affine> = cl.iter().filter(|c| c.kind == Kind::Ge).map(|c| normalize(c.form.clone())).collect();
    let basis = if r > 1 { reduce_basis(&ge, r, basis)? } else { basis };
    // a₀ + a·(y₀ + Bᵀw) = (a₀ + a·y₀) + (B a)·w
    let yq: Vec<Q> = y0.iter().map(|x| Q::from_integer(x.clone())).collect();
    let bq: Vec<Vec<Q>> = basis.iter().map(|row| row.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
    let wform: Vec<Affine> = ge
        .iter()
        .map(|a| {
            let mut f = Vec::with_capacity(r + 1);
            f.push(&a[0] + dot(&a[1..], &yq));
            f.extend(bq.iter().map(|row| dot(&a[1..], row)));
            normalize(f)
        })
        .collect();
    let mut budget = BUDGET;
    let Some(w) = enumerate_inner(wform, r, &mut Vec::new(), &mut budget)? else { return Ok(None) };
    let mut y: Vec<Q> = yq;
    for (wi, row) in w.iter().zip(&bq) {
        for (t, b) in y.iter_mut().zip(row) {
            *t += wi * b;
        }
    }
    Ok(cl.iter().all(|c| holds(c.kind, &eval(&c.form, &y))).then_some(y))
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn eval(a: &Affine, y: &[Q]) -> Q {
    &a[0] + dot(&a[1..], y)
}

/// Solve every Int/Even condition on integer y: returns y₀ and basis rows bᵢ
/// with the solution set y₀ + Σ wᵢbᵢ (w ∈ Zʳ), or None if there is no solution.
fn congruence_lattice(cl: &[Constraint], r: usize) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let mut y0 = vec![BigInt::zero(); r];
    let mut basis: Vec<Vec<BigInt>> =
        (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    for c in cl {
        let m = match c.kind {
            Kind::Int => BigInt::one(),
            Kind::Even => BigInt::from(2),
            _ => continue,
        };
        // a₀ + a·y ∈ mZ  ⇔  A₀ + A·y ≡ 0 (mod M) over the common denominator
        let l = c.form.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let lq = Q::from_integer(l.clone());
        let ints: Vec<BigInt> = c.form.iter().map(|x| (x * &lq).to_integer()).collect();
        let big_m = &m * &l;
        let b = &ints[0] + ints[1..].iter().zip(&y0).fold(BigInt::zero(), |acc, (a, y)| acc + a * y);
        let u: Vec<BigInt> =
            basis.iter().map(|row| ints[1..].iter().zip(row).fold(BigInt::zero(), |acc, (a, x)| acc + a * x)).collect();
        // u·w ≡ −b (mod M): eliminate the last column of [I | u ; 0 | M]
        let mut rows: Vec<(Vec<BigInt>, BigInt)> = (0..r)
            .map(|i| ((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect(), u[i].mod_floor(&big_m)))
            .collect();
        rows.push((vec![BigInt::zero(); r], big_m.clone()));
        let piv = loop {
            let Some(p) = (0..rows.len()).filter(|&i| !rows[i].1.is_zero()).min_by_key(|&i| rows[i].1.abs()) else {
                unreachable!("the modulus row is nonzero")
            };
            let mut done = true;
            for i in 0..rows.len() {
                if i == p || rows[i].1.is_zero() {
                    continue;
                }
                let f = rows[i].1.div_floor(&rows[p].1);
                let (pv, pl) = rows[p].clone();
                for (x, y) in rows[i].0.iter_mut().zip(&pv) {
                    *x -= &f * y;
                }
                rows[i].1 -= &f * &pl;
                done &= rows[i].1.is_zero();
            }
            if done {
                break p;
            }
        };
        let (v, g) = rows.swap_remove(piv);
        let (g, v) = if g.is_negative() { (-g, v.into_iter().map(|x| -x).collect::<Vec<_>>()) } else { (g, v) };
        if !b.mod_floor(&g).is_zero() {
            return None;
        }
        let k = -(&b / &g);
        // y₀ += Bᵀ(k v); new basis rows = kernel rows expressed in y
        for (vi, row) in v.iter().zip(&basis) {
            for (t, x) in y0.iter_mut().zip(row) {
                *t += &k * vi * x;
            }
        }
        let kernel: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|(kv, _)| {
                let mut out = vec![BigInt::zero(); r];
                for (ki, row) in kv.iter().zip(&basis) {
                    for (t, x) in out.iter_mut().zip(row) {
                        *t += ki * x;
                    }
                }
                out
            })
            .collect();
        basis = hnf(&kernel);
        // keep y₀ small: reduce it against the triangular basis
        for row in &basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let f = y0[p].div_floor(&row[p]);
            for (t, x) in y0.iter_mut().zip(row) {
                *t -= &f * x;
            }
        }
    }
    Some((y0, basis))
}

/// LLL-reduce the lattice basis in the metric Σ (yᵢ/rangeᵢ)², so that the
/// region cut out by the inequalities looks roughly like a unit cube.
fn reduce_basis(ge: &[Affine], r: usize, basis: Vec<Vec<BigInt>>) -> Result<Vec<Vec<BigInt>>, SearchError> {
    let mut weight = Vec::with_capacity(r);
    for i in 0..r {
        // move variable i to the front and project
        let perm: Vec<Affine> = ge
            .iter()
            .map(|a| {
                let mut f = a.clone();
                f.swap(1, i + 1);
                f
            })
            .collect();
        let cl: Vec<Constraint> = perm.into_iter().map(|form| Constraint { kind: Kind::Ge, form }).collect();
        let Some((lo, hi)) = bounds_first(&cl, r)? else { return Ok(basis) };
        let span = hi - lo + Q::one();
        weight.push(Q::one() / (&span * &span));
    }
    let bq: Vec<Vec<Q>> = basis.iter().map(|row| row.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
    let gram: Vec<Vec<Q>> = bq
        .iter()
        .map(|x| bq.iter().map(|y| x.iter().zip(y).zip(&weight).fold(Q::zero(), |acc, ((a, b), w)| acc + a * b * w)).collect())
        .collect();
    let t = lll(&gram).transform;
    Ok(t.iter()
        .map(|trow| {
            let mut out = vec![BigInt::zero(); r];
            for (c, row) in trow.iter().zip(&basis) {
                for (o, x) in out.iter_mut().zip(row) {
                    *o += c * x;
                }
            }
            out
        })
        .collect())
}

/// Depth-first enumeration of integer w with every form nonnegative.
fn enumerate_inner(
    ge: Vec<Affine>,
    r: usize,
    fixed: &mut Vec<Q>,
    budget: &mut u64,
) -> Result<Option<Vec<Q>>, SearchError> {
    if r == 0 {
        return Ok(ge.iter().all(|a| !a[0].is_negative()).then(|| fixed.clone()));
    }
    let cl: Vec<Constraint> = ge.iter().map(|a| Constraint { kind: Kind::Ge, form: a.clone() }).collect();
    let Some((lo, hi)) = bounds_first(&cl, r)? else { return Ok(None) };
    let ylo = lo.ceil().to_integer();
    let yhi = hi.floor().to_integer();
    if ylo > yhi {
        return Ok(None);
    }
    let steps = (&yhi - &ylo + 1u32).to_u64().unwrap_or(u64::MAX);
    if steps > *budget {
        return Err(SearchError::TooLarge(steps));
    }
    let mut y = ylo;
    while y <= yhi {
        *budget = budget.saturating_sub(1);
        let yq = Q::from_integer(y.clone());
        let next: Vec<Affine> = ge
            .iter()
            .map(|a| {
                let mut f = Vec::with_capacity(a.len() - 1);
                f.push(&a[0] + &a[1] * &yq);
                f.extend_from_slice(&a[2..]);
                f
            })
            .collect();
        fixed.push(yq);
        if let Some(sol) = enumerate_inner(next, r - 1, fixed, budget)? {
            return Ok(Some(sol));
        }
        fixed.pop();
        y += 1u32;
    }
    Ok(None)
}

/// Bounds on the first variable after projecting out the others (Fourier–Motzkin).
fn bounds_first(cl: &[Constraint], r: usize) -> Result<Option<(Q, Q)>, SearchError> {
    let mut ineq: Vec<Affine> = cl.iter().filter(|c| c.kind == Kind::Ge).map(|c| c.form.clone()).collect();
    for v in (1..r).rev() {
        let col = v + 1;
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for a in ineq {
            if a[col].is_positive() {
                pos.push(a);
            } else if a[col].is_negative() {
                neg.push(a);
            } else {
                zero.push(a);
            }
        }
        let mut next = zero;
        for p in &pos {
            for n in &neg {
                let (cp, cn) = (p[col].clone(), -n[col].clone());
                let comb: Affine = p.iter().zip(n).map(|(x, y)| x * &cn + y * &cp).collect();
                next.push(normalize(comb));
            }
        }
        next.iter_mut().for_each(|a| a.truncate(col));
        ineq = prune(next);
        if ineq.len() > FM_LIMIT {
            return Err(SearchError::TooLarge(ineq.len() as u64));
        }
    }
    let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
    for a in &ineq {
        let (c0, c1) = (&a[0], &a[1]);
        if c1.is_zero() {
            if c0.is_negative() {
                return Ok(None);
            }
        } else {
            let b = -c0 / c1;
            if c1.is_positive() {
                lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
            } else {
                hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => Ok(if l > h { None } else { Some((l, h)) }),
        _ => Err(SearchError::Unbounded),
    }
}

/// Drop duplicates and, among forms with the same direction, all but the tightest.
fn prune(mut v: Vec<Affine>) -> Vec<Affine> {
    // forms are primitive integer vectors; a₀ + a·y ≥ 0 is tightest for the least a₀
    v.sort_by(|x, y| x[1..].cmp(&y[1..]).then_with(|| x[0].cmp(&y[0])));
    v.dedup_by(|later, earlier| later[1..] == earlier[1..]);
    v
}

/// Scale a nonnegativity form to a primitive integer vector (keeps FM sizes small).
fn normalize(a: Affine) -> Affine {
    let den = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return a;
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qr};

    fn c(kind: Kind, v: &[Q]) -> Constraint {
        Constraint { kind, form: v.to_vec() }
    }

    #[test]
    fn one_variable_even_range() {
        // 3 ≤ x ≤ 9 with x even and x/2 − 1 even leaves only x = 6
        let cons = vec![
            c(Kind::Ge, &[q(-3), q(1)]),
            c(Kind::Ge, &[q(9), q(-1)]),
            c(Kind::Even, &[q(0), q(1)]),
            c(Kind::Even, &[qr(-1, 1), qr(1, 2)]),
        ];
        assert_eq!(solve(&cons, 1).unwrap(), Some(vec![q(6)]));
    }

    #[test]
    fn equalities_are_eliminated() {
        // x + y = 10, x − y ≥ 4, both even, y ≥ 0
        let cons = vec![
            c(Kind::Eq, &[q(-10), q(1), q(1)]),
            c(Kind::Ge, &[q(-4), q(1), q(-1)]),
            c(Kind::Ge, &[q(0), q(0), q(1)]),
            c(Kind::Ge, &[q(0), q(1), q(0)]),
            c(Kind::Even, &[q(0), q(1), q(0)]),
            c(Kind::Even, &[q(0), q(0), q(1)]),
        ];
        let p = solve(&cons, 2).unwrap().unwrap();
        assert_eq!(&p[0] + &p[1], q(10));
        assert!(p[0] >= &p[1] + q(4));
        assert!(p.iter().all(|x| x.is_integer() && x.to_integer().is_even()));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let cons = vec![c(Kind::Ge, &[q(-3), q(1)]), c(Kind::Ge, &[q(2), q(-1)])];
        assert_eq!(solve(&cons, 1).unwrap(), None);
        let cons = vec![c(Kind::Ge, &[q(-3), q(1)])];
        assert_eq!(solve(&cons, 1), Err(SearchError::Unbounded));
    }
}
