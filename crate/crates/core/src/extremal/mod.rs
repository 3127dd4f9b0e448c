//! Minimal-norm bounds and the extremal theta-series machinery.
//!
//! A strongly N-modular lattice rationally equivalent to k copies of C^{(N)}
//! has Θ = g₁^k Σ_{i≤t} cᵢ g₂^i and ∅-shadow Θ_S = s₁^k Σ cᵢ s₂^i. Prescribing
//! the first t+1 theta coefficients fixes the cᵢ by a triangular solve; the
//! resulting pair of series is then tested for the integrality, parity and
//! shadow-count conditions a lattice must satisfy.
//!
//! When the target minimum μ leaves theta coefficients a_μ..a_t free, the
//! conditions become an integer program over those coefficients, solved
//! exactly by [`search`].

pub mod search;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{fmt_q, q, sigma, Q};
use crate::etafunc::{self, build_basis, dim_c, EtaError, GeneratorBasis};
use crate::qseries::{Exponent, QSeries, SeriesError, GRID};
use search::{Constraint, Kind, SearchError};

/// Default working order, in units of q.
pub const DEFAULT_ORDER: i64 = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("level {0} is not one of 1, 2, 3, 5, 6, 7, 11, 14, 15, 23")]
    UnsupportedN(u64),
    #[error("dimension {n} is not a positive multiple of dim C^(N) = {d}")]
    BadDimension { n: u64, d: u64 },
    #[error("triangular system is singular or under-resolved: {0}")]
    InconsistentSystem(String),
    #[error("coefficient index {i} outside 1..={t}")]
    IndexOutOfRange { i: usize, t: usize },
    #[error("prefix of length {len} exceeds t+1 = {max}")]
    PrefixTooLong { len: usize, max: usize },
    #[error("completion search too large: {0}")]
    SearchTooLarge(String),
    #[error(transparent)]
    Eta(EtaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl From<EtaError> for ExtremalError {
    fn from(e: EtaError) -> Self {
        match e {
            EtaError::UnsupportedN(n) => ExtremalError::UnsupportedN(n),
            other => ExtremalError::Eta(other),
        }
    }
}

type Result<T> = std::result::Result<T, ExtremalError>;

/// D_N = 24·d(N)/∏_{p|N}(p+1).
pub fn critical_dimension(level: u64) -> Result<u64> {
    Ok(etafunc::critical_dimension(level)?)
}

/// Upper bound on the minimal norm: 2⌊n/D_N⌋ + 2, or 3 when N is odd and n = D_N − d(N).
pub fn bound_mu(level: u64, n: u64) -> Result<u64> {
    let dn = critical_dimension(level)?;
    let d = dim_c(level);
    if n == 0 || n % d != 0 {
        return Err(ExtremalError::BadDimension { n, d });
    }
    if level % 2 == 1 && n + d == dn {
        return Ok(3);
    }
    Ok(2 * (n / dn) + 2)
}

/// Bound on the minimal Euclidean norm of a self-dual code over Z/4Z of length n.
pub fn z4_bound(n: u64) -> u64 {
    8 * (n / 24) + 8 + if n % 24 == 23 { 4 } else { 0 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalProblem {
    #[serde(rename = "N")]
    pub level: u64,
    pub n: u64,
    /// Number of copies of C^{(N)}.
    pub k: u64,
    /// Truncation index ⌊k·ord₁(g₁)⌋.
    pub t: usize,
}

impl ExtremalProblem {
    pub fn new(level: u64, n: u64) -> Result<Self> {
        critical_dimension(level)?;
        let d = dim_c(level);
        if n == 0 || n % d != 0 {
            return Err(ExtremalError::BadDimension { n, d });
        }
        let k = n / d;
        let t = (ord1_g1(level) * q(k as i64)).floor().to_integer();
        let t = usize::try_from(t).expect("small truncation index");
        Ok(ExtremalProblem { level, n, k, t })
    }

    /// The oddity k·σ(N) mod 8 of C^{(N)}^k, for odd N.
    pub fn oddity(&self) -> Option<i64> {
        (self.level % 2 == 1).then(|| ((self.k * sigma(self.level)) % 8) as i64)
    }
}

fn ord1_g1(level: u64) -> Q {
    let s = sigma(level) as i64;
    if level % 2 == 1 {
        Q::new(s.into(), 8.into())
    } else {
        Q::new(s.into(), 6.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible(Vec<String>),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }

    pub fn reasons(&self) -> &[String] {
        match self {
            Verdict::Feasible => &[],
            Verdict::Infeasible(r) => r,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalSolution {
    pub problem: ExtremalProblem,
    /// Target minimum used for the verdict.
    pub mu: u64,
    pub c: Vec<Q>,
    pub theta: QSeries,
    pub shadow: QSeries,
    pub verdict: Verdict,
}

/// The JSON shape of a solution.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalReport {
    #[serde(rename = "N")]
    pub level: u64,
    pub n: u64,
    pub mu: u64,
    pub c: Vec<String>,
    pub theta: QSeries,
    pub shadow: QSeries,
    pub verdict: String,
    pub reasons: Vec<String>,
}

impl ExtremalSolution {
    pub fn report(&self) -> ExtremalReport {
        ExtremalReport {
            level: self.problem.level,
            n: self.problem.n,
            mu: self.mu,
            c: self.c.iter().map(fmt_q).collect(),
            theta: self.theta.clone(),
            shadow: self.shadow.clone(),
            verdict: if self.verdict.is_feasible() { "Feasible" } else { "Infeasible" }.into(),
            reasons: self.verdict.reasons().to_vec(),
        }
    }
}

fn basis_cache() -> &'static Mutex<HashMap<(u64, i64), Arc<GeneratorBasis>>> {
    static CELL: OnceLock<Mutex<HashMap<(u64, i64), Arc<GeneratorBasis>>>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

/// Generators for `level` correct below grid numerator `order`, shared across threads.
pub fn shared_basis(level: u64, order: i64) -> Result<Arc<GeneratorBasis>> {
    if let Some(b) = basis_cache().lock().expect("cache lock").get(&(level, order)) {
        return Ok(b.clone());
    }
    let b = Arc::new(build_basis(level, order)?);
    basis_cache().lock().expect("cache lock").insert((level, order), b.clone());
    Ok(b)
}

/// The series g₁^k g₂^i and s₁^k s₂^i for i < count, exact below a common order.
#[derive(Clone, Debug)]
pub struct Family {
    pub problem: ExtremalProblem,
    /// Grid numerator below which every series is exact.
    pub order: i64,
    pub theta_terms: Vec<QSeries>,
    pub shadow_terms: Vec<QSeries>,
}

impl Family {
    /// Terms for the standard solve (count = t+1), exact below `order_q` powers of q.
    pub fn new(problem: &ExtremalProblem, order_q: i64) -> Result<Self> {
        Self::with_count(problem, order_q, problem.t + 1, true)
    }

    pub fn with_count(problem: &ExtremalProblem, order_q: i64, count: usize, shadow: bool) -> Result<Self> {
        let target = order_q * GRID;
        let mut build_order = target;
        // s₂ has a pole at q = 0, so products lose absolute precision; widen until exact
        for _ in 0..8 {
            let b = shared_basis(problem.level, build_order)?;
            let k = problem.k as i64;
            let mut theta_terms = Vec::with_capacity(count);
            let mut cur = b.g1.pow_int(k)?;
            for i in 0..count {
                if i > 0 {
                    cur = cur.mul(&b.g2);
                }
                theta_terms.push(cur.clone());
            }
            let mut shadow_terms = Vec::new();
            if shadow {
                let mut cur = b.s1.pow_int(k)?;
                for i in 0..count {
                    if i > 0 {
                        cur = cur.mul(&b.s2);
                    }
                    shadow_terms.push(cur.clone());
                }
            }
            let reached = theta_terms.iter().chain(&shadow_terms).map(QSeries::order).min().unwrap_or(target);
            if reached >= target {
                return Ok(Family {
                    problem: problem.clone(),
                    order: target,
                    theta_terms: theta_terms.iter().map(|s| s.truncate(target)).collect(),
                    shadow_terms: shadow_terms.iter().map(|s| s.truncate(target)).collect(),
                });
            }
            build_order += target - reached;
        }
        Err(ExtremalError::InconsistentSystem("working precision could not be reached".into()))
    }

    /// Solve Σ cᵢ [q^j] g₁^k g₂^i = target_j for j < target.len().
    pub fn coefficients(&self, target: &[Q]) -> Result<Vec<Q>> {
        let count = target.len();
        if count > self.theta_terms.len() {
            return Err(ExtremalError::PrefixTooLong { len: count, max: self.theta_terms.len() });
        }
        let mut c: Vec<Q> = Vec::with_capacity(count);
        for i in 0..count {
            let e = i as i64 * GRID;
            if e >= self.order {
                return Err(ExtremalError::InconsistentSystem(format!("q^{i} lies beyond the working order")));
            }
            let lead = self.theta_terms[i].coeff(e);
            if lead.is_zero() {
                return Err(ExtremalError::InconsistentSystem(format!("g1^k g2^{i} does not start at q^{i}")));
            }
            let mut acc = target[i].clone();
            for (j, cj) in c.iter().enumerate() {
                acc -= cj * self.theta_terms[j].coeff(e);
            }
            c.push(acc / lead);
        }
        Ok(c)
    }

    pub fn theta(&self, c: &[Q]) -> QSeries {
        combine(&self.theta_terms, c, self.order)
    }

    pub fn shadow(&self, c: &[Q]) -> QSeries {
        combine(&self.shadow_terms, c, self.order)
    }

    /// Solve with prefix `prefix` padded by zeros to length t+1 and judge it at minimum `mu`.
    pub fn solve(&self, prefix: &[Q], mu: u64) -> Result<ExtremalSolution> {
        let t = self.problem.t;
        if prefix.len() > t + 1 {
            return Err(ExtremalError::PrefixTooLong { len: prefix.len(), max: t + 1 });
        }
        let mut target = prefix.to_vec();
        target.resize(t + 1, Q::zero());
        let c = self.coefficients(&target)?;
        let theta = self.theta(&c);
        let shadow = self.shadow(&c);
        let verdict = check(&self.problem, &theta, &shadow, mu);
        Ok(ExtremalSolution { problem: self.problem.clone(), mu, c, theta, shadow, verdict })
    }
}

fn combine(terms: &[QSeries], c: &[Q], order: i64) -> QSeries {
    let mut s = QSeries::zero(order);
    for (term, ci) in terms.iter().zip(c) {
        if !ci.is_zero() {
            s = s.add(&term.scale(ci));
        }
    }
    s
}

/// μ implied by a prefix: the first j ≥ 1 with a nonzero prescribed coefficient, else t+1.
fn implied_mu(problem: &ExtremalProblem, prefix: &[Q]) -> u64 {
    (1..=problem.t).find(|&j| prefix.get(j).is_some_and(|x| !x.is_zero())).unwrap_or(problem.t + 1) as u64
}

/// Triangular solve for a prescribed theta prefix, with theta and shadow through `order_q`.
pub fn solve_prescribed(problem: &ExtremalProblem, prefix: &[Q], order_q: i64) -> Result<ExtremalSolution> {
    let fam = Family::new(problem, order_q)?;
    fam.solve(prefix, implied_mu(problem, prefix))
}

/// Θ_S = s₁^k Σ cᵢ s₂^i.
pub fn shadow_from_coeffs(problem: &ExtremalProblem, c: &[Q], order_q: i64) -> Result<QSeries> {
    let fam = Family::with_count(problem, order_q, c.len().max(1), true)?;
    Ok(fam.shadow(c))
}

/// Re-judge a solution at a different target minimum.
pub fn feasibility_check(problem: &ExtremalProblem, sol: &ExtremalSolution, mu: u64) -> Verdict {
    check(problem, &sol.theta, &sol.shadow, mu)
}

fn at(e: i64) -> String {
    format!("q^{}", Exponent(e))
}

fn is_even_int(x: &Q) -> bool {
    x.is_integer() && x.to_integer().is_even()
}

fn check(problem: &ExtremalProblem, theta: &QSeries, shadow: &QSeries, mu: u64) -> Verdict {
    let mut r = Vec::new();
    let mu_e = mu as i64 * GRID;
    // (a) integrality, constant term, vanishing below μ
    if theta.coeff(0) != Q::one() {
        r.push(format!("theta constant term is {}, expected 1", fmt_q(&theta.coeff(0))));
    }
    for (e, v) in theta.terms() {
        if e % GRID != 0 {
            r.push(format!("theta has a term at non-integral {}", at(e)));
        } else if !v.is_integer() || v.is_negative() {
            r.push(format!("theta coefficient {} at {} is not a nonnegative integer", fmt_q(v), at(e)));
        }
        if e > 0 && e < mu_e {
            r.push(format!("theta coefficient {} at {} must vanish below the minimum {mu}", fmt_q(v), at(e)));
        }
    }
    // (b) Θ ≡ 1 mod 2
    for (e, v) in theta.terms() {
        if e > 0 && v.is_integer() && !is_even_int(v) {
            r.push(format!("theta coefficient {} at {} is odd, so theta is not 1 mod 2", fmt_q(v), at(e)));
        }
    }
    // (c) shadow integrality and a constant value mod 2
    for (e, v) in shadow.terms() {
        if !v.is_integer() || v.is_negative() {
            r.push(format!("shadow coefficient {} at {} is not a nonnegative integer", fmt_q(v), at(e)));
        } else if e != 0 && !is_even_int(v) {
            r.push(format!("shadow coefficient {} at {} is odd, so the shadow is not constant mod 2", fmt_q(v), at(e)));
        }
    }
    // (d) an odd lattice has few short shadow vectors
    let odd = theta.terms().any(|(e, v)| e % GRID == 0 && (e / GRID) % 2 != 0 && !v.is_zero());
    if odd {
        let below = |lim: i64| shadow.terms().filter(|(e, _)| 4 * e < lim).fold(Q::zero(), |a, (_, v)| a + v);
        let quarter = below(mu_e);
        if !quarter.is_zero() {
            r.push(format!("odd lattice: {} shadow vectors of norm below {}, expected none", fmt_q(&quarter), fmt_q(&crate::arith::qr(mu as i64, 4))));
        }
        let half: Q = shadow.terms().filter(|(e, _)| 2 * e < mu_e).fold(Q::zero(), |a, (_, v)| a + v);
        if half > q(2) {
            r.push(format!("odd lattice: {} shadow vectors of norm below {}, at most 2 allowed", fmt_q(&half), fmt_q(&crate::arith::qr(mu as i64, 2))));
        }
    }
    // (e) shadow norms ≡ oddity/4 mod 2 (2-adically) for odd determinant
    if let Some(o) = problem.oddity() {
        for (e, v) in shadow.terms() {
            if !v.is_zero() && (e - 6 * o).rem_euclid(16) != 0 {
                r.push(format!("shadow term at {} violates the norm congruence for oddity {o}", at(e)));
            }
        }
    }
    if r.is_empty() {
        Verdict::Feasible
    } else {
        Verdict::Infeasible(r)
    }
}

/// Outcome of deciding a target minimum with the free coefficients a_μ..a_t.
#[derive(Clone, Debug)]
pub enum Decision {
    /// A completion exists; `solution` passes every check.
    Feasible { branch: &'static str, solution: Box<ExtremalSolution> },
    Infeasible,
    Undecided(String),
}

/// Decide whether some choice of the free theta coefficients a_μ..a_t gives a series pair passing every check.
pub fn decide(fam: &Family, mu: u64) -> Result<Decision> {
    let p = &fam.problem;
    let t = p.t;
    if mu == 0 {
        return Err(ExtremalError::PrefixTooLong { len: 0, max: t + 1 });
    }
    // above t+1 nothing is free and the fixed series is judged at μ
    let mut base_prefix = vec![Q::zero(); t + 1];
    base_prefix[0] = Q::one();
    let free: Vec<usize> = (mu as usize..=t).collect();
    let f = free.len();
    let base_c = fam.coefficients(&base_prefix)?;
    let mut thetas = vec![fam.theta(&base_c)];
    let mut shadows = vec![fam.shadow(&base_c)];
    for &v in &free {
        let mut pre = vec![Q::zero(); t + 1];
        pre[v] = Q::one();
        let c = fam.coefficients(&pre)?;
        thetas.push(fam.theta(&c));
        shadows.push(fam.shadow(&c));
    }
    let aff = |ser: &[QSeries], e: i64| -> Vec<Q> { ser.iter().map(|s| s.coeff(e)).collect() };
    let support = |ser: &[QSeries]| -> Vec<i64> {
        let set: BTreeSet<i64> = ser.iter().flat_map(|s| s.terms().map(|(e, _)| e).collect::<Vec<_>>()).collect();
        set.into_iter().filter(|&e| e < fam.order).collect()
    };
    let th_exp = support(&thetas);
    let sh_exp = support(&shadows);
    let mu_e = mu as i64 * GRID;
    let mut base = Vec::new();
    for &e in &th_exp {
        let mut a = aff(&thetas, e);
        if e == 0 {
            a[0] -= Q::one();
            base.push(Constraint { kind: Kind::Eq, form: a });
        } else if e % GRID != 0 || e < mu_e {
            base.push(Constraint { kind: Kind::Eq, form: a });
        } else {
            base.push(Constraint { kind: Kind::Ge, form: a.clone() });
            base.push(Constraint { kind: Kind::Even, form: a });
        }
    }
    let oddity = p.oddity();
    for &e in &sh_exp {
        let a = aff(&shadows, e);
        if oddity.is_some_and(|o| (e - 6 * o).rem_euclid(16) != 0) {
            base.push(Constraint { kind: Kind::Eq, form: a });
            continue;
        }
        base.push(Constraint { kind: Kind::Ge, form: a.clone() });
        base.push(Constraint { kind: if e == 0 { Kind::Int } else { Kind::Even }, form: a });
    }
    // the free unknowns are theta coefficients themselves
    for j in 0..f {
        let mut a = vec![Q::zero(); f + 1];
        a[j + 1] = Q::one();
        base.push(Constraint { kind: Kind::Ge, form: a.clone() });
        base.push(Constraint { kind: Kind::Even, form: a });
    }
    let eq = |a: Vec<Q>| Constraint { kind: Kind::Eq, form: a };
    let mut branches: Vec<(&'static str, Vec<Constraint>)> = Vec::new();
    let even_branch: Vec<Constraint> =
        th_exp.iter().filter(|&&e| e % GRID == 0 && (e / GRID) % 2 != 0).map(|&e| eq(aff(&thetas, e))).collect();
    branches.push(("even", even_branch));
    let small4: Vec<i64> = sh_exp.iter().copied().filter(|&e| 4 * e < mu_e).collect();
    let small2: Vec<i64> = sh_exp.iter().copied().filter(|&e| 4 * e >= mu_e && 2 * e < mu_e).collect();
    let odd_base: Vec<Constraint> = small4.iter().map(|&e| eq(aff(&shadows, e))).collect();
    let mut none = odd_base.clone();
    none.extend(small2.iter().map(|&e| eq(aff(&shadows, e))));
    branches.push(("odd", none));
    for &e0 in &small2 {
        let mut opt = odd_base.clone();
        for &e in &small2 {
            let mut a = aff(&shadows, e);
            if e == e0 {
                a[0] -= q(2);
            }
            opt.push(eq(a));
        }
        branches.push(("odd", opt));
    }
    let mut undecided = None;
    for (name, extra) in branches {
        let mut cons = base.clone();
        cons.extend(extra);
        match search::solve(&cons, f) {
            Ok(Some(x)) => {
                let mut prefix = base_prefix.clone();
                for (j, &v) in free.iter().enumerate() {
                    prefix[v] = x[j].clone();
                }
                let sol = fam.solve(&prefix, mu)?;
                if !sol.verdict.is_feasible() {
                    return Err(ExtremalError::InconsistentSystem(format!(
                        "completion {:?} fails the direct check: {:?}",
                        prefix.iter().map(fmt_q).collect::<Vec<_>>(),
                        sol.verdict.reasons()
                    )));
                }
                return Ok(Decision::Feasible { branch: name, solution: Box::new(sol) });
            }
            Ok(None) => {}
            Err(SearchError::Unbounded) => undecided = Some("a free coefficient is unbounded".to_string()),
            Err(SearchError::TooLarge(n)) => undecided = Some(format!("{n} candidates exceed the search budget")),
        }
    }
    Ok(undecided.map_or(Decision::Infeasible, Decision::Undecided))
}

/// Solve at target minimum `mu`: the fixed solution when μ ≥ t+1, otherwise
/// the first feasible completion of a_μ..a_t if one exists.
pub fn solve_extremal(problem: &ExtremalProblem, mu: u64, order_q: i64) -> Result<ExtremalSolution> {
    if mu == 0 {
        return Err(ExtremalError::PrefixTooLong { len: 0, max: problem.t + 1 });
    }
    let fam = Family::new(problem, order_q)?;
    let plain = fam.solve(&[Q::one()], mu)?;
    if mu as usize > problem.t {
        return Ok(plain);
    }
    match decide(&fam, mu)? {
        Decision::Feasible { solution, .. } => Ok(*solution),
        Decision::Infeasible => {
            let mut sol = plain;
            let mut reasons = sol.verdict.reasons().to_vec();
            reasons.push(format!("no choice of the free coefficients a_{mu}..a_{} passes every check", problem.t));
            sol.verdict = Verdict::Infeasible(reasons);
            Ok(sol)
        }
        Decision::Undecided(why) => Err(ExtremalError::SearchTooLarge(why)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanStep {
    pub mu: u64,
    /// "candidate-feasible", "infeasible" or "undecided: …".
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub n: u64,
    pub k: u64,
    pub t: usize,
    pub bound: u64,
    /// Largest μ ≤ bound passing the series constraints.
    pub best_mu: Option<u64>,
    /// The bound itself is attained by a candidate series.
    pub extremal_feasible: bool,
    /// n = D_N − d(N) for odd N, where the bound is 3.
    pub exceptional: bool,
    pub trail: Vec<ScanStep>,
}

pub const CANDIDATE: &str = "candidate-feasible";

/// Test every n ≤ n_max (multiples of d(N)) from bound_mu downward.
pub fn scan(level: u64, n_max: u64, order_q: i64) -> Result<Vec<ScanRow>> {
    let dn = critical_dimension(level)?;
    let d = dim_c(level);
    shared_basis(level, order_q * GRID)?;
    let ns: Vec<u64> = (1..=n_max / d).map(|i| i * d).collect();
    ns.par_iter()
        .map(|&n| {
            let p = ExtremalProblem::new(level, n)?;
            let bound = bound_mu(level, n)?;
            let fam = Family::new(&p, order_q)?;
            let mut trail = Vec::new();
            let mut best = None;
            for mu in (1..=bound).rev() {
                let (outcome, branch) = match decide(&fam, mu)? {
                    Decision::Feasible { branch, .. } => (CANDIDATE.to_string(), Some(branch.to_string())),
                    Decision::Infeasible => ("infeasible".to_string(), None),
                    Decision::Undecided(w) => (format!("undecided: {w}"), None),
                };
                let ok = outcome == CANDIDATE;
                trail.push(ScanStep { mu, outcome, branch });
                if ok {
                    best = Some(mu);
                    break;
                }
            }
            Ok(ScanRow {
                n,
                k: p.k,
                t: p.t,
                bound,
                best_mu: best,
                extremal_feasible: best == Some(bound),
                exceptional: level % 2 == 1 && n + d == dn,
                trail,
            })
        })
        .collect()
}

/// Dimensions whose bound is decided infeasible.
pub fn flagged(rows: &[ScanRow]) -> Vec<u64> {
    rows.iter()
        .filter(|r| r.trail.first().is_some_and(|s| s.mu == r.bound && s.outcome == "infeasible"))
        .map(|r| r.n)
        .collect()
}

/// cᵢ = −(k/i)·[q^i] θ(g₁) g₁^{−k−1} (q/g₂)^i, with θ = q d/dq.
pub fn bl_coefficient(problem: &ExtremalProblem, i: usize, order_q: i64) -> Result<Q> {
    if i == 0 || i > problem.t {
        return Err(ExtremalError::IndexOutOfRange { i, t: problem.t });
    }
    bl_raw(problem, i, order_q)
}

/// The same expansion without the i ≤ t restriction; it is the coefficient of
/// g₂^i in g₁^{−k}, so it matches a triangular solve of any length above i.
pub fn bl_raw(problem: &ExtremalProblem, i: usize, order_q: i64) -> Result<Q> {
    let b = shared_basis(problem.level, order_q.max(i as i64 + 2) * GRID)?;
    let k = problem.k as i64;
    let q_over_g2 = QSeries::monomial(GRID, Q::one(), b.g2.order()).mul(&b.g2.inverse()?);
    let f = b.g1.theta_op().mul(&b.g1.pow_int(-k - 1)?).mul(&q_over_g2.pow_int(i as i64)?);
    let e = i as i64 * GRID;
    if e >= f.order() {
        return Err(ExtremalError::InconsistentSystem(format!("q^{i} lies beyond the working order")));
    }
    Ok(-(q(k) / q(i as i64)) * f.coeff(e))
}

/// For N = 1 and n = 24m − l (1 ≤ l ≤ 24): c_{2m} of the series 1 + O(q^{2m+1}).
pub fn c2m_sign(n: u64, order_q: i64) -> Result<Q> {
    let p = ExtremalProblem::new(1, n)?;
    let m = (n / 24 + 1) as usize;
    let count = 2 * m + 1;
    let fam = Family::with_count(&p, order_q.max(count as i64 + 1), count, false)?;
    let mut target = vec![Q::zero(); count];
    target[0] = Q::one();
    Ok(fam.coefficients(&target)?.pop().expect("nonempty"))
}

/// For N = 2: with c = 0, nonnegativity of the coefficients of s₁^{−2a} s₂^{−2b};
/// with c > 0, nonnegativity of the logarithmic derivative of q^c s₁^{−2a} s₂^{−2b}.
/// Checked below q^{order_q}.
pub fn ln2_nonneg_check(a: u64, b: u64, c: u64, order_q: i64) -> Result<bool> {
    let target = order_q * GRID;
    let mut build = target;
    for _ in 0..8 {
        let bs = shared_basis(2, build)?;
        let f = bs.s1.pow_int(-2 * a as i64)?.mul(&bs.s2.pow_int(-2 * b as i64)?).mul_monomial(c as i64 * GRID);
        let g = if c == 0 { f } else { f.log_derivative()? };
        if g.order() >= target {
            return Ok(g.truncate(target).terms().all(|(_, v)| !v.is_negative()));
        }
        build += target - g.order();
    }
    Err(ExtremalError::InconsistentSystem("working precision could not be reached".into()))
}
