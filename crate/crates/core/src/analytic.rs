//! Floating-point theta values on the upper half-plane and numeric checks of
//! the transformation laws.
//!
//! Θ(z) = Σ e^{πi z v·v}. Sums are truncated at a norm T chosen so that the
//! remainder is provably below [`TAIL`]: points of a translate of L are at
//! least √min(L) apart, so at most ((√t + ρ)/ρ)^n of them have norm ≤ t with
//! ρ = √min(L)/2, and the remainder is at most πy∫_T^∞ e^{−πyt} N(t) dt.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{PrimeSet, Q};
use crate::lattice::genus::chi_cd;
use crate::lattice::matrix::QMat;
use crate::lattice::modularity::modularity_levels;
use crate::lattice::{det_pi, even_level, min_norm, norm_counts, pi_dual, shadow, GramLattice, LatticeError, PointSet};

/// Smallest imaginary part accepted for evaluation.
pub const IM_FLOOR: f64 = 0.05;
/// Bound on the neglected part of every theta sum.
pub const TAIL: f64 = 1e-13;
/// Agreement required of the two sides of a transformation law.
pub const TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("Im z = {0} is below the accuracy floor {IM_FLOOR}")]
    AccuracyFloor(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

type Result<T> = std::result::Result<T, AnalyticError>;

/// The fixed base points τ used by every check.
pub fn sample_points() -> [Complex64; 3] {
    [Complex64::new(0.0, 1.0), Complex64::new(1.0 / 3.0, 0.5), Complex64::new(-0.2, 2.0)]
}

fn xi_pow(e: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * e.rem_euclid(8) as f64)
}

/// Upper bound for Σ_{v·v > T} e^{−πy v·v} over a translate of an n-dimensional lattice with packing radius ρ.
pub fn tail_bound(dim: usize, rho: f64, y: f64, t: f64) -> f64 {
    let a = std::f64::consts::PI * y;
    let h = (1.0 / a).min(1.0);
    let count = |s: f64| ((s.sqrt() + rho) / rho).powi(dim as i32);
    let (mut sum, mut s) = (0.0, t);
    for _ in 0..1_000_000 {
        // on [s, s+h] the integrand is at most e^{−a s} N(s + h)
        let term = (-a * s).exp() * count(s + h) * h;
        sum += term;
        s += h;
        if term < 1e-30 * sum.max(1e-300) && s > t + 10.0 * dim as f64 / a {
            break;
        }
    }
    a * sum
}

struct Points<'a> {
    gram: &'a QMat,
    offset: Option<&'a [Q]>,
}

impl PointSet for Points<'_> {
    fn gram(&self) -> &QMat {
        self.gram
    }
    fn offset(&self) -> Option<&[Q]> {
        self.offset
    }
}

/// Evaluates Θ of a lattice or coset at many points, sharing one norm histogram.
pub struct ThetaEvaluator {
    gram: QMat,
    offset: Option<Vec<Q>>,
    dim: usize,
    rho: f64,
    reach: f64,
    hist: Vec<(f64, f64)>,
}

impl ThetaEvaluator {
    pub fn new<P: PointSet>(p: &P) -> Result<Self> {
        let base = GramLattice::new(p.gram().clone())?;
        let m = min_norm(&base).to_f64().expect("finite minimum");
        Ok(ThetaEvaluator {
            gram: p.gram().clone(),
            offset: p.offset().map(<[Q]>::to_vec),
            dim: base.dim(),
            rho: m.sqrt() / 2.0,
            reach: -1.0,
            hist: Vec::new(),
        })
    }

    /// Norm bound T for which the tail at Im z = y is below [`TAIL`].
    pub fn cutoff(&self, y: f64) -> f64 {
        let mut t = 1.0;
        while tail_bound(self.dim, self.rho, y, t) > TAIL {
            t *= 1.25;
        }
        t.ceil()
    }

    fn ensure(&mut self, t: f64) -> Result<()> {
        if t <= self.reach {
            return Ok(());
        }
        let bound = Q::from_integer((t as i64).into());
        let pts = Points { gram: &self.gram, offset: self.offset.as_deref() };
        let counts = norm_counts(&pts, &bound)?;
        self.hist = counts.norms().map(|(n, c)| (n.to_f64().expect("finite"), c as f64)).collect();
        self.reach = t;
        Ok(())
    }

    pub fn eval(&mut self, z: Complex64) -> Result<Complex64> {
        if z.im < IM_FLOOR {
            return Err(AnalyticError::AccuracyFloor(z.im));
        }
        self.ensure(self.cutoff(z.im))?;
        let w = Complex64::new(0.0, std::f64::consts::PI) * z;
        Ok(self.hist.iter().map(|&(n, c)| c * (w * n).exp()).sum())
    }
}

/// Θ at one point.
pub fn eval_theta<P: PointSet>(p: &P, z: Complex64) -> Result<Complex64> {
    ThetaEvaluator::new(p)?.eval(z)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    pub law: String,
    pub matrix: [i64; 4],
    /// Largest |lhs − rhs| over the sample points.
    pub residual: f64,
    pub passed: bool,
}

fn report(law: &str, matrix: [i64; 4], residual: f64) -> TransformReport {
    TransformReport { law: law.into(), matrix, residual, passed: residual < TOLERANCE }
}

fn mobius(m: [i64; 4], z: Complex64) -> Complex64 {
    let [a, b, c, d] = m.map(|x| x as f64);
    (a * z + b) / (c * z + d)
}

/// Sample points placed so that z and Mz stay well inside the half-plane for
/// M = (· ·; c d) of determinant m: z = −d/c + √m τ/|c| gives |cz + d| = √m |τ|,
/// Im z = √m Im τ/|c| and Im Mz = √m Im τ/(|c| |τ|²).
fn mapped_points(c: i64, d: i64, m: u64) -> Vec<Complex64> {
    let sm = (m as f64).sqrt();
    sample_points()
        .iter()
        .map(|&tau| {
            if c == 0 {
                tau
            } else {
                Complex64::new(-(d as f64) / c as f64, 0.0) + tau * sm / (c.abs() as f64)
            }
        })
        .collect()
}

/// Θ_L(Sz) against det_{Π(d)}^{−1/2} χ_{c,d} (√(cz+d))^n Θ_{L^{*Π(d)}}(z) for an even L and
/// S = (a b; c d) in SL₂(Z) with cd a multiple of the even level. S is replaced
/// by −S when c < 0 (or c = 0 and d < 0); both act identically on z.
pub fn verify_level_transform(l: &GramLattice, s: [i64; 4]) -> Result<TransformReport> {
    let [a, b, c, d] = s;
    if a * d - b * c != 1 {
        return Err(AnalyticError::PreconditionViolation(format!("det {s:?} != 1")));
    }
    let lvl = even_level(l)?.ok_or_else(|| AnalyticError::PreconditionViolation("lattice is not even".into()))?;
    if (c * d).rem_euclid(lvl as i64) != 0 {
        return Err(AnalyticError::PreconditionViolation(format!("cd = {} is not a multiple of {lvl}", c * d)));
    }
    let t = if c < 0 || (c == 0 && d < 0) { [-a, -b, -c, -d] } else { s };
    let [_, _, c, d] = t;
    let pi = PrimeSet::dividing(d);
    let dual = pi_dual(l, &pi)?;
    let scale = det_pi(l, &pi).to_f64().expect("finite").powf(-0.5) * xi_pow(chi_cd(l, c, d)? as i64);
    let n = l.dim() as i32;
    let mut lhs_eval = ThetaEvaluator::new(l)?;
    let mut rhs_eval = ThetaEvaluator::new(&dual)?;
    let mut worst: f64 = 0.0;
    for z in mapped_points(c, d, 1) {
        let lhs = lhs_eval.eval(mobius(t, z))?;
        let root = (Complex64::new(c as f64, 0.0) * z + d as f64).sqrt();
        let rhs = scale * root.powi(n) * rhs_eval.eval(z)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(report("level", s, worst))
}

/// Θ_L(W z) against χ_{c,d} (√(√m c z + d/√m))^n Θ_L(z) for W = m^{−1/2}(ma b; mc d),
/// ad − bc = 1, m | d and mc a multiple of the even level, when L has an m-modularity.
pub fn verify_atkin_lehner(l: &GramLattice, m: u64, s: [i64; 4]) -> Result<TransformReport> {
    let [a, b, c, d] = s;
    let mi = m as i64;
    if a * d - b * c != 1 {
        return Err(AnalyticError::PreconditionViolation(format!("ad − bc != 1 for {s:?}")));
    }
    if d.rem_euclid(mi) != 0 {
        return Err(AnalyticError::PreconditionViolation(format!("d = {d} is not a multiple of {m}")));
    }
    let lvl = even_level(l)?.ok_or_else(|| AnalyticError::PreconditionViolation("lattice is not even".into()))?;
    if (mi * c).rem_euclid(lvl as i64) != 0 {
        return Err(AnalyticError::PreconditionViolation(format!("mc = {} is not a multiple of {lvl}", mi * c)));
    }
    if !modularity_levels(l)?.contains(&m) {
        return Err(AnalyticError::PreconditionViolation(format!("no {m}-modularity")));
    }
    // primes of d beyond those of m must not divide det L, or the Π(d)-dual differs from the Π(m)-dual
    let det = l.det().to_integer();
    let dm = PrimeSet::dividing(d);
    let mm = PrimeSet::dividing(mi);
    if dm.restrict(&crate::arith::prime_factors_big(&det)) != mm.restrict(&crate::arith::prime_factors_big(&det)) {
        return Err(AnalyticError::PreconditionViolation(format!("d = {d} has primes dividing det beyond those of {m}")));
    }
    if c < 0 || (c == 0 && d < 0) {
        return Err(AnalyticError::PreconditionViolation("normalize W so that c > 0, or c = 0 and d > 0".into()));
    }
    let chi = xi_pow(chi_cd(l, c, d)? as i64);
    let sm = (m as f64).sqrt();
    let n = l.dim() as i32;
    let mut ev = ThetaEvaluator::new(l)?;
    let mut worst: f64 = 0.0;
    let w = [a * mi, b, c * mi, d];
    for z in mapped_points(c * mi, d, m) {
        let lhs = ev.eval(mobius(w, z))?;
        let root = (Complex64::new(sm * c as f64, 0.0) * z + d as f64 / sm).sqrt();
        let rhs = chi * root.powi(n) * ev.eval(z)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(report("atkin-lehner", s, worst))
}

/// Θ_S(z) against det^{1/2} (ξ/√z)^n Θ_L(1 − 1/z) for an integral lattice L.
pub fn verify_shadow_transform(l: &GramLattice) -> Result<TransformReport> {
    let sh = shadow(l)?;
    let mut s_eval = ThetaEvaluator::new(&sh)?;
    let mut l_eval = ThetaEvaluator::new(l)?;
    let det = l.det().to_f64().expect("finite").sqrt();
    let n = l.dim() as i32;
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for tau in sample_points() {
        let lhs = s_eval.eval(tau)?;
        let rhs = det * (xi_pow(1) / tau.sqrt()).powi(n) * l_eval.eval(one - one / tau)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(report("shadow", [0, -1, 1, -1], worst))
}

/// Largest |c| (the lower-left entry of S, or c in W_m) keeping every mapped
/// sample point above the floor, with a cheaper limit for higher dimensions
/// where deep sums are costly.
pub fn c_limit(dim: usize, m: u64) -> i64 {
    let worst_im = sample_points().iter().map(|t| t.im / t.norm_sqr()).fold(f64::INFINITY, f64::min);
    let by_floor = (worst_im / (IM_FLOOR * (m as f64).sqrt())).floor() as i64;
    if dim > 4 {
        by_floor.min(1)
    } else {
        by_floor
    }
}

/// Random S = (a b; c d) ∈ SL₂(Z) with cd ≡ 0 mod the even level, |c| ≤ c_limit and |d| ≤ 36.
pub fn random_level_matrices<R: Rng>(l: &GramLattice, rng: &mut R, count: usize) -> Result<Vec<[i64; 4]>> {
    let lvl = even_level(l)?.ok_or_else(|| AnalyticError::PreconditionViolation("lattice is not even".into()))? as i64;
    let cmax = c_limit(l.dim(), 1);
    let mut out = Vec::new();
    while out.len() < count {
        let c = rng.gen_range(-cmax..=cmax);
        let d = rng.gen_range(-36i64..=36);
        if d == 0 || (c * d).rem_euclid(lvl) != 0 || c.gcd(&d) != 1 {
            continue;
        }
        out.push(complete(c, d, rng));
    }
    Ok(out)
}

/// Random (a, b, c, d) for [`verify_atkin_lehner`]: ad − bc = 1, m | d, lvl | mc, c ≥ 0.
pub fn random_atkin_lehner_matrices<R: Rng>(l: &GramLattice, m: u64, rng: &mut R, count: usize) -> Result<Vec<[i64; 4]>> {
    let lvl = even_level(l)?.ok_or_else(|| AnalyticError::PreconditionViolation("lattice is not even".into()))? as i64;
    let mi = m as i64;
    let det = l.det().to_integer();
    let det_primes = crate::arith::prime_factors_big(&det);
    let cmax = c_limit(l.dim(), m).max(1);
    let dmax = 36 / mi;
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count {
        guard += 1;
        if guard > 1_000_000 {
            return Err(AnalyticError::PreconditionViolation(format!("no admissible W_{m} found")));
        }
        let c = rng.gen_range(0..=cmax);
        let d = mi * rng.gen_range(1..=dmax.max(1));
        if (mi * c).rem_euclid(lvl) != 0 || c.gcd(&d) != 1 || (c == 0 && d != 1) {
            continue;
        }
        let extra = PrimeSet::dividing(d).restrict(&det_primes) != PrimeSet::dividing(mi).restrict(&det_primes);
        if extra {
            continue;
        }
        out.push(complete(c, d, rng));
    }
    Ok(out)
}

/// a, b with ad − bc = 1, shifted by a random multiple of (c, d).
fn complete<R: Rng>(c: i64, d: i64, rng: &mut R) -> [i64; 4] {
    let e = d.extended_gcd(&c);
    // e.x·d + e.y·c = ±1
    let sign = e.gcd.signum();
    let (a0, b0) = (sign * e.x, -sign * e.y);
    let k = rng.gen_range(-3i64..=3);
    [a0 + k * c, b0 + k * d, c, d]
}

/// The level law on `count` random admissible matrices, the W_m law on up to `count` random W_m
/// for every modularity level m of L that admits one, and the shadow law.
/// Deterministic in `seed`.
pub fn transform_suite(l: &GramLattice, count: usize, seed: u64) -> Result<Vec<TransformReport>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for s in random_level_matrices(l, &mut rng, count)? {
        out.push(verify_level_transform(l, s)?);
    }
    for m in modularity_levels(l)? {
        // levels whose W_m needs |c| beyond the sampling limit are skipped
        let Ok(ms) = random_atkin_lehner_matrices(l, m, &mut rng, count) else { continue };
        for s in ms {
            out.push(verify_atkin_lehner(l, m, s)?);
        }
    }
    out.push(verify_shadow_transform(l)?);
    Ok(out)
}
