//! Exact arithmetic in Z[ζ_m], used to evaluate finite Gauss sums.

use std::f64::consts::PI;

use num_complex::Complex64;

/// The ring Z[x]/(x^m − 1); equality in Z[ζ_m] is tested modulo Φ_m.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: usize,
    phi: Vec<i128>,
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i128; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / den[dd];
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[k + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Coefficients (constant term first) of the m-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: usize) -> Vec<i128> {
    let mut num = vec![0i128; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

impl Cyclotomic {
    pub fn new(m: usize) -> Self {
        Cyclotomic { m, phi: cyclotomic_poly(m) }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn zero(&self) -> Vec<i128> {
        vec![0; self.m]
    }

    /// c·ζ^k.
    pub fn monomial(&self, k: i64, c: i128) -> Vec<i128> {
        let mut v = self.zero();
        v[k.rem_euclid(self.m as i64) as usize] = c;
        v
    }

    pub fn add_assign(&self, a: &mut [i128], b: &[i128]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }

    pub fn mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    out[(i + j) % self.m] += x * y;
                }
            }
        }
        out
    }

    /// Remainder modulo Φ_m.
    pub fn reduce(&self, a: &[i128]) -> Vec<i128> {
        let mut r = a.to_vec();
        let dd = self.phi.len() - 1;
        for k in (dd..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            for (j, &pj) in self.phi.iter().enumerate() {
                r[k - dd + j] -= c * pj;
            }
        }
        r.truncate(dd);
        r
    }

    pub fn equal(&self, a: &[i128], b: &[i128]) -> bool {
        let diff: Vec<i128> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&diff).iter().all(|&x| x == 0)
    }

    /// Numerical value with ζ = e^{2πi/m}.
    pub fn eval(&self, a: &[i128]) -> Complex64 {
        a.iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * PI * k as f64 / self.m as f64))
            .sum()
    }
}
