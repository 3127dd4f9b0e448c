//! Fincke–Pohst enumeration of short vectors in a lattice or a lattice coset.
//!
//! The search runs on an LLL-reduced basis with floating-point bounds (plus a
//! small safety margin), while every norm is recomputed exactly in scaled
//! integer arithmetic, so counts and norms are exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::{lll, q_inverse, q_mul, z_to_q, QMat, ZMat};
use super::LatticeError;
use crate::arith::Q;

/// Exact norm histogram: `counts[k]` vectors have norm `k / denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCounts {
    pub denom: i128,
    pub counts: BTreeMap<i128, u64>,
}

impl NormCounts {
    pub fn norms(&self) -> impl Iterator<Item = (Q, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (Q::new(BigInt::from(k), BigInt::from(self.denom)), c))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Smallest norm at or above `floor` (exclusive of zero when floor > 0).
    pub fn smallest_above(&self, floor: &Q) -> Option<Q> {
        self.norms().map(|(n, _)| n).find(|n| n >= floor)
    }
}

/// Enumeration data prepared once per lattice or coset.
pub struct Enumerator {
    n: usize,
    /// rows: reduced basis in the caller's coordinates
    transform: ZMat,
    pohst: Vec<Vec<f64>>,
    /// denominator-cleared reduced Gram
    m: Vec<Vec<i128>>,
    /// offset in reduced coordinates, times `e`
    off: Vec<i128>,
    e: i128,
    denom: i128,
}

fn to_i128(x: &BigInt) -> Result<i128, LatticeError> {
    x.to_i128().ok_or_else(|| LatticeError::EnumerationTooLarge("entry exceeds 128 bits".into()))
}

impl Enumerator {
    /// Prepare enumeration of the coset `offset + Z^n` under the Gram matrix `gram`.
    pub fn new(gram: &QMat, offset: Option<&[Q]>) -> Result<Self, LatticeError> {
        let n = gram.len();
        let red = lll(gram);
        let g = &red.gram;
        let gden = g.iter().flatten().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
        let m: Vec<Vec<i128>> = g
            .iter()
            .map(|r| r.iter().map(|x| to_i128(&(x * Q::from_integer(gden.clone())).to_integer())).collect())
            .collect::<Result<_, _>>()?;
        // offset in reduced coordinates: y_red = y · T⁻¹
        let (off, e) = match offset {
            Some(o) if o.iter().any(|x| !x.is_zero()) => {
                let tinv = q_inverse(&z_to_q(&red.transform)).expect("unimodular transform");
                let o_red = q_mul(&vec![o.to_vec()], &tinv).remove(0);
                let e = o_red.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
                let off = o_red
                    .iter()
                    .map(|x| {
                        let r = x - x.floor();
                        to_i128(&(r * Q::from_integer(e.clone())).to_integer())
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (off, to_i128(&e)?)
            }
            _ => (vec![0; n], 1),
        };
        let denom = to_i128(&gden)? * e * e;
        let mut q: Vec<Vec<f64>> =
            g.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        Ok(Enumerator { n, transform: red.transform, pohst: q, m, off, e, denom })
    }

    /// Exact norms are integers divided by this.
    pub fn denom(&self) -> i128 {
        self.denom
    }

    /// Visit every point of norm ≤ `bound`. The callback receives the point's
    /// reduced coordinates times `e` and its norm numerator over `denom()`.
    pub fn for_each<F: FnMut(&[i128], i128)>(&self, bound: &Q, mut f: F) -> Result<(), LatticeError> {
        let n = self.n;
        if n == 0 {
            f(&[], 0);
            return Ok(());
        }
        let bnum = (bound * Q::from_integer(BigInt::from(self.denom))).floor().to_integer();
        let bnum = to_i128(&bnum)?;
        let fb = bound.to_f64().unwrap_or(f64::INFINITY) * (1.0 + 1e-9) + 1e-9;
        let mut st = State {
            z: vec![0; n],
            y: vec![0.0; n],
            part_exact: vec![0; n + 1],
            part_float: vec![0.0; n + 1],
            w: vec![vec![0; n]; n + 1],
        };
        self.descend(n - 1, fb, bnum, &mut st, &mut f);
        Ok(())
    }

    fn descend<F: FnMut(&[i128], i128)>(&self, i: usize, fb: f64, bnum: i128, st: &mut State, f: &mut F) {
        let qii = self.pohst[i][i];
        let mut c = 0.0;
        for j in i + 1..self.n {
            c -= self.pohst[i][j] * st.y[j];
        }
        let rem = fb - st.part_float[i + 1];
        if rem < 0.0 {
            return;
        }
        let r = (rem / qii).sqrt();
        let e = self.e as f64;
        let o = self.off[i] as f64 / e;
        let lo = (c - r - o).ceil() as i128;
        let hi = (c + r - o).floor() as i128;
        for k in lo..=hi {
            let zi = self.e * k + self.off[i];
            let yi = zi as f64 / e;
            let t = yi - c;
            let pf = st.part_float[i + 1] + qii * t * t;
            // exact partial norm over the trailing coordinates i..n
            let pe = st.part_exact[i + 1] + self.m[i][i] * zi * zi + 2 * zi * st.w[i + 1][i];
            st.z[i] = zi;
            st.y[i] = yi;
            if i == 0 {
                if pe <= bnum {
                    f(&st.z, pe);
                }
                continue;
            }
            st.part_float[i] = pf;
            st.part_exact[i] = pe;
            for r in 0..i {
                st.w[i][r] = st.w[i + 1][r] + self.m[r][i] * zi;
            }
            self.descend(i - 1, fb, bnum, st, f);
        }
    }

    /// Convert enumerated scaled reduced coordinates back to the caller's
    /// coordinates (as rationals; integral for a zero offset).
    pub fn to_coords(&self, z: &[i128]) -> Vec<Q> {
        let n = self.n;
        let mut out = vec![Q::zero(); n];
        for (i, &zi) in z.iter().enumerate() {
            if zi == 0 {
                continue;
            }
            let zq = Q::new(BigInt::from(zi), BigInt::from(self.e));
            for j in 0..n {
                if !self.transform[i][j].is_zero() {
                    out[j] += &zq * Q::from_integer(self.transform[i][j].clone());
                }
            }
        }
        out
    }

    pub fn norm_counts(&self, bound: &Q) -> Result<NormCounts, LatticeError> {
        let bnum = (bound * Q::from_integer(BigInt::from(self.denom))).floor().to_integer();
        let cap = to_i128(&bnum)?;
        let mut dense: Option<Vec<u64>> = if cap >= 0 && cap < 50_000_000 {
            Some(vec![0; cap as usize + 1])
        } else {
            None
        };
        let mut sparse: BTreeMap<i128, u64> = BTreeMap::new();
        self.for_each(bound, |_, nn| match dense.as_mut() {
            Some(d) => d[nn as usize] += 1,
            None => *sparse.entry(nn).or_insert(0) += 1,
        })?;
        if let Some(d) = dense {
            for (k, c) in d.into_iter().enumerate() {
                if c > 0 {
                    sparse.insert(k as i128, c);
                }
            }
        }
        Ok(NormCounts { denom: self.denom, counts: sparse })
    }
}

struct State {
    z: Vec<i128>,
    y: Vec<f64>,
    part_exact: Vec<i128>,
    part_float: Vec<f64>,
    w: Vec<Vec<i128>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::q_from_i64;

    #[test]
    fn counts_for_z2() {
        let g = q_from_i64(&[vec![1, 0], vec![0, 1]]);
        let e = Enumerator::new(&g, None).unwrap();
        let c = e.norm_counts(&Q::from_integer(5.into())).unwrap();
        let got: Vec<(i128, u64)> = c.counts.into_iter().collect();
        assert_eq!(got, vec![(0, 1), (1, 4), (2, 4), (4, 4), (5, 8)]);
    }

    #[test]
    fn coset_of_z() {
        let g = q_from_i64(&[vec![1]]);
        let half = vec![Q::new(1.into(), 2.into())];
        let e = Enumerator::new(&g, Some(&half)).unwrap();
        let c = e.norm_counts(&Q::from_integer(7.into())).unwrap();
        assert_eq!(c.denom, 4);
        let got: Vec<(i128, u64)> = c.counts.into_iter().collect();
        assert_eq!(got, vec![(1, 2), (9, 2), (25, 2)]);
    }

    #[test]
    fn skewed_basis_is_handled() {
        // a badly skewed basis of Z^2
        let g = q_from_i64(&[vec![1, 10], vec![10, 101]]);
        let e = Enumerator::new(&g, None).unwrap();
        let c = e.norm_counts(&Q::from_integer(2.into())).unwrap();
        assert_eq!(c.total(), 9);
        let mut seen = 0;
        e.for_each(&Q::from_integer(1.into()), |z, nn| {
            let x = e.to_coords(z);
            let (a, b) = (&x[0], &x[1]);
            let norm = a * a + Q::from_integer(20.into()) * a * b + Q::from_integer(101.into()) * b * b;
            assert_eq!(norm, Q::new(BigInt::from(nn), BigInt::from(e.denom())));
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 5);
    }
}
