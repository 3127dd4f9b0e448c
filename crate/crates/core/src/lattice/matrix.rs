//! Exact dense matrices over Z and Q, Smith and Hermite normal forms, and a
//! float-guided LLL reduction acting on Gram matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Q;

pub type QMat = Vec<Vec<Q>>;
pub type ZMat = Vec<Vec<BigInt>>;

pub fn q_identity(n: usize) -> QMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn z_identity(n: usize) -> ZMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn q_from_i64(rows: &[Vec<i64>]) -> QMat {
    rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect()
}

pub fn z_to_q(a: &ZMat) -> QMat {
    a.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

/// Integer matrix if every entry is integral.
pub fn q_to_z(a: &QMat) -> Option<ZMat> {
    a.iter()
        .map(|r| r.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect())
        .collect()
}

pub fn q_mul(a: &QMat, b: &QMat) -> QMat {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut s = Q::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s += x * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn z_mul(a: &ZMat, b: &ZMat) -> ZMat {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            s += x * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// B·G·Bᵀ, the Gram matrix of the vectors whose coordinates are the rows of B.
pub fn congruence(b: &QMat, g: &QMat) -> QMat {
    q_mul(&q_mul(b, g), &transpose(b))
}

pub fn q_scale(a: &QMat, c: &Q) -> QMat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Inverse by Gauss–Jordan elimination; None if singular.
pub fn q_inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a.to_vec();
    let mut inv = q_identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

pub fn q_det(a: &QMat) -> Q {
    let n = a.len();
    let mut m: QMat = a.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    det
}

/// Pivots of the rational LDLᵀ decomposition (squared Gram–Schmidt lengths).
/// None if some leading minor vanishes.
pub fn ldl_pivots(g: &QMat) -> Option<Vec<Q>> {
    let n = g.len();
    let mut m: QMat = g.to_vec();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let p = m[k][k].clone();
        if p.is_zero() {
            return None;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
        out.push(p);
    }
    Some(out)
}

/// Smith normal form of an m×n integer matrix: returns (U, d, V) with U·A·V
/// diagonal with entries d (nonnegative, each dividing the next), U and V unimodular.
pub fn smith(a: &ZMat) -> (ZMat, Vec<BigInt>, ZMat) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut a = a.to_vec();
    let mut u = z_identity(m);
    let mut v = z_identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(u, a, v);
            };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let x = &f * &a[t][j];
                    a[i][j] -= x;
                }
                for j in 0..m {
                    let x = &f * &u[t][j];
                    u[i][j] -= x;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                for i in t..m {
                    let x = &f * &a[i][t];
                    a[i][j] -= x;
                }
                for i in 0..n {
                    let x = &f * &v[i][t];
                    v[i][j] -= x;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                    for j in 0..m {
                        let x = u[i][j].clone();
                        u[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..n {
                a[t][j] = -&a[t][j];
            }
            for j in 0..m {
                u[t][j] = -&u[t][j];
            }
        }
    }
    finish_smith(u, a, v)
}

fn finish_smith(u: ZMat, a: ZMat, v: ZMat) -> (ZMat, Vec<BigInt>, ZMat) {
    let k = a.len().min(a.first().map_or(0, |r| r.len()));
    let d = (0..k).map(|i| a[i][i].abs()).collect();
    (u, d, v)
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `gens`.
/// Returns the nonzero rows: upper triangular, positive pivots, entries above
/// each pivot reduced into [0, pivot).
pub fn hnf(gens: &ZMat) -> ZMat {
    let ncols = gens.first().map_or(0, |r| r.len());
    let mut rows: ZMat = gens.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: ZMat = Vec::new();
    for col in 0..ncols {
        // gcd-combine every row with a nonzero entry in this column
        let mut piv: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match piv.take() {
                None => piv = Some(r),
                Some(p) => {
                    let e = p[col].extended_gcd(&r[col]);
                    let (pa, ra) = (&p[col] / &e.gcd, &r[col] / &e.gcd);
                    let newp: Vec<BigInt> =
                        p.iter().zip(&r).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let other: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &ra * x - &pa * y).collect();
                    if other.iter().any(|x| !x.is_zero()) {
                        rest.push(other);
                    }
                    piv = Some(newp);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = piv {
            if p[col].is_negative() {
                p.iter_mut().for_each(|x| *x = -&*x);
            }
            for r in out.iter_mut() {
                let f = r[col].div_floor(&p[col]);
                if !f.is_zero() {
                    for j in 0..ncols {
                        let x = &f * &p[j];
                        r[j] -= x;
                    }
                }
            }
            out.push(p);
        }
    }
    out
}

/// Canonical basis of the Z-span of the rows of a rational matrix.
pub fn hnf_q(gens: &QMat) -> QMat {
    let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let z: ZMat = gens
        .iter()
        .map(|r| r.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
        .collect();
    hnf(&z)
        .into_iter()
        .map(|r| r.into_iter().map(|x| Q::new(x, den.clone())).collect())
        .collect()
}

/// Result of an LLL reduction: transform T (integer, unimodular) with
/// reduced Gram = T·G·Tᵀ.
pub struct Reduced {
    pub transform: ZMat,
    pub gram: QMat,
}

fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn gso(g: &QMat, mu: &mut [Vec<f64>], bstar: &mut [f64], k: usize) {
    for j in 0..k {
        let mut s = to_f64(&g[k][j]);
        for l in 0..j {
            s -= mu[j][l] * mu[k][l] * bstar[l];
        }
        mu[k][j] = s / bstar[j];
    }
    let mut s = to_f64(&g[k][k]);
    for l in 0..k {
        s -= mu[k][l] * mu[k][l] * bstar[l];
    }
    bstar[k] = s;
}

/// LLL reduction (δ = 0.99) of a positive definite Gram matrix. Gram–Schmidt
/// data is recomputed in floating point from the exact Gram after every change,
/// so the returned Gram and transform are exact.
pub fn lll(g: &QMat) -> Reduced {
    let n = g.len();
    let mut g: QMat = g.to_vec();
    let mut t = z_identity(n);
    if n <= 1 {
        return Reduced { transform: t, gram: g };
    }
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut bstar = vec![0.0f64; n];
    for k in 0..n {
        gso(&g, &mut mu, &mut bstar, k);
    }
    let mut k = 1;
    let mut steps = 0usize;
    while k < n && steps < 100_000 {
        steps += 1;
        gso(&g, &mut mu, &mut bstar, k);
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r == 0.0 || !r.is_finite() {
                continue;
            }
            let r = BigInt::from(r as i64);
            let qr = Q::from_integer(r.clone());
            // b_k -= r b_j
            for l in 0..n {
                let x = &r * &t[j][l];
                t[k][l] -= x;
            }
            for l in 0..n {
                let x = &qr * &g[j][l];
                g[k][l] -= x;
            }
            let x = &qr * &g[k][j];
            g[k][k] -= x;
            for l in 0..n {
                if l != k {
                    g[l][k] = g[k][l].clone();
                }
            }
            gso(&g, &mut mu, &mut bstar, k);
        }
        if bstar[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            t.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            gso(&g, &mut mu, &mut bstar, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    Reduced { transform: t, gram: g }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_form_of_small_matrix() {
        let a = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (u, d, v) = smith(&a);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let prod = z_mul(&z_mul(&u, &a), &v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d[i].clone() } else { BigInt::zero() };
                assert_eq!(prod[i][j], want);
            }
        }
    }

    #[test]
    fn hnf_is_canonical() {
        let a = z(&[&[2, 0], &[0, 2], &[1, 1]]);
        let b = z(&[&[1, -1], &[3, -1]]);
        assert_eq!(hnf(&a), hnf(&b));
        assert_eq!(hnf(&a), z(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn lll_keeps_determinant() {
        let g = q_from_i64(&[vec![101, 97, 40], vec![97, 94, 38], vec![40, 38, 17]]);
        let r = lll(&g);
        assert_eq!(q_det(&r.gram), q_det(&g));
        assert_eq!(congruence(&z_to_q(&r.transform), &g), r.gram);
        assert!(r.gram.iter().enumerate().all(|(i, row)| row[i] <= g[i][i]));
    }

    #[test]
    fn inverse_round_trip() {
        let g = q_from_i64(&[vec![4, 1], vec![1, 6]]);
        let inv = q_inverse(&g).unwrap();
        assert_eq!(q_mul(&g, &inv), q_identity(2));
        assert_eq!(q_det(&g), Q::from_integer(23.into()));
    }
}
