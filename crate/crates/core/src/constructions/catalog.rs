//! The catalog of extremal strongly modular lattices and their odd (O) and
//! shorter (S) associates, plus a few classical lattices.
//!
//! Entries published as Gram matrices live in `data/catalog.json`; the rest are
//! built here from codes or by neighboring and are validated by tests.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::f4::{construction_a_f4, hexacode, odd_hexacode, shorter_hexacode};
use super::{c_lattice, e8, span_lattice, ConstructionError};
use crate::arith::{q, qr, Q};
use crate::lattice::matrix::{q_inverse, q_mul, QMat};
use crate::lattice::neighbor::{even_pairing_sublattice, two_neighbors};
use crate::lattice::{coset_min_norm, min_norm, short_vectors, CosetLattice, GramLattice};

const DATA: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DataEntry {
    name: String,
    level: u64,
    kind: String,
    min: u64,
    gram: Vec<Vec<i64>>,
}

/// Catalog metadata: the modular level N, the family (E even extremal, O odd,
/// S shorter, R other) and the expected minimal norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub level: u64,
    pub kind: String,
    pub min: u64,
    pub dim: usize,
    pub constructed: bool,
}

fn data() -> &'static [DataEntry] {
    static CELL: OnceLock<Vec<DataEntry>> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(DATA).expect("bundled catalog is valid JSON"))
}

const BUILT: [(&str, u64, &str, u64, usize); 11] = [
    ("E8", 1, "R", 2, 8),
    ("Leech", 1, "E", 4, 24),
    ("BW16", 2, "E", 4, 16),
    ("O2", 2, "O", 3, 16),
    ("K12", 3, "E", 4, 12),
    ("O3", 3, "O", 3, 12),
    ("S3", 3, "S", 3, 10),
    ("E6", 6, "E", 4, 8),
    ("E7", 7, "E", 4, 6),
    ("O7", 7, "O", 3, 6),
    ("C", 0, "R", 1, 0),
];

/// Every catalog entry (the parametrized `C<N>` family is listed once as "C").
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = BUILT
        .iter()
        .filter(|b| b.0 != "C")
        .map(|&(name, level, kind, min, dim)| CatalogEntry {
            name: name.into(),
            level,
            kind: kind.into(),
            min,
            dim,
            constructed: true,
        })
        .collect();
    out.extend(data().iter().map(|d| CatalogEntry {
        name: d.name.clone(),
        level: d.level,
        kind: d.kind.clone(),
        min: d.min,
        dim: d.gram.len(),
        constructed: false,
    }));
    out
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    catalog_entries().into_iter().find(|e| e.name == name)
}

/// Look up a lattice by name. `C<N>` gives C^{(N)} for squarefree N.
pub fn catalog(name: &str) -> Result<GramLattice, ConstructionError> {
    if let Some(d) = data().iter().find(|d| d.name == name) {
        return Ok(GramLattice::from_i64(&d.gram)?);
    }
    match name {
        "E8" => Ok(e8()),
        "Leech" => leech(),
        "BW16" => bw16(),
        "O2" => build_o2(),
        "K12" => construction_a_f4(&hexacode()),
        "O3" => construction_a_f4(&odd_hexacode()),
        "S3" => construction_a_f4(&shorter_hexacode()),
        "E6" => Ok(a2_tensor_d4()),
        "E7" => Ok(cyclotomic_seven()),
        "O7" => o7(),
        _ => {
            if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<u64>().ok()) {
                if n > 0 && crate::arith::is_squarefree(n) {
                    return Ok(c_lattice(n));
                }
            }
            Err(ConstructionError::UnknownName(name.into()))
        }
    }
}

fn diag(n: usize, c: Q) -> QMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { c.clone() } else { q(0) }).collect()).collect()
}

/// BW16 = (1/√2)·{x ∈ Z¹⁶ : x mod 2 ∈ RM(1,4), Σx ≡ 0 mod 4}.
pub fn bw16() -> Result<GramLattice, ConstructionError> {
    let mut gens: QMat = Vec::new();
    gens.push(vec![q(1); 16]);
    for bit in 0..4 {
        gens.push((0..16).map(|p| q(((p >> bit) & 1) as i64)).collect());
    }
    // 2·D16
    for i in 0..15 {
        let mut r = vec![q(0); 16];
        r[i] = q(2);
        r[i + 1] = q(2);
        gens.push(r);
    }
    let mut r = vec![q(0); 16];
    r[0] = q(4);
    gens.push(r);
    // the coordinate functions have weight 8, so their sums are ≡ 0 mod 4 already
    span_lattice(&gens, &diag(16, qr(1, 2)))
}

/// The extended binary Golay code: cyclic shifts of the quadratic residues
/// mod 23 with the point at infinity, plus the all-ones word.
pub fn golay_generators() -> Vec<Vec<u8>> {
    let qr_set: Vec<usize> = (1..23).map(|i| (i * i) % 23).collect();
    let mut rows = Vec::new();
    for s in 0..23 {
        let mut v = vec![0u8; 24];
        for &x in &qr_set {
            v[(x + s) % 23] = 1;
        }
        v[23] = 1;
        rows.push(v);
    }
    rows.push(vec![1; 24]);
    rows
}

/// The Leech lattice (1/√8)·⟨2c (c ∈ Golay), (−3, 1²³), 4eᵢ + 4eⱼ⟩.
pub fn leech() -> Result<GramLattice, ConstructionError> {
    let mut gens: QMat = golay_generators().iter().map(|c| c.iter().map(|&b| q(2 * b as i64)).collect()).collect();
    let mut odd = vec![q(1); 24];
    odd[0] = q(-3);
    gens.push(odd);
    for j in 1..24 {
        let mut r = vec![q(0); 24];
        r[0] = q(4);
        r[j] = q(4);
        gens.push(r);
    }
    let mut r = vec![q(0); 24];
    r[0] = q(8);
    gens.push(r);
    span_lattice(&gens, &diag(24, qr(1, 8)))
}

/// G₂ ⊗ F₄ realized as A₂ ⊗ D₄.
pub fn a2_tensor_d4() -> GramLattice {
    let a2 = [[2i64, -1], [-1, 2]];
    let d4 = [[2i64, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]];
    let mut g = vec![vec![0i64; 8]; 8];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..4 {
                for l in 0..4 {
                    g[4 * i + k][4 * j + l] = a2[i][j] * d4[k][l];
                }
            }
        }
    }
    GramLattice::from_i64(&g).expect("tensor of positive definite forms").reduced()
}

/// The ideal (1 − ζ)² of Z[ζ₇] with the form Tr(x ȳ)/7.
pub fn cyclotomic_seven() -> GramLattice {
    // |1 − ζ|⁴ = 6 − 4(ζ + ζ⁶) + (ζ² + ζ⁵); Tr(h ζᵐ)/7 = h_{−m} because h(1) = 0
    let h = [6i64, -4, 1, 0, 0, 1, -4];
    let g: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| h[(j + 7 - i) % 7]).collect()).collect();
    GramLattice::from_i64(&g).expect("trace form is positive definite").reduced()
}

/// The odd neighbor of E^{(7)} relative to a vector of norm 8 whose class mod 2E has minimum 8.
pub fn o7() -> Result<GramLattice, ConstructionError> {
    let e = cyclotomic_seven();
    for (v, nrm) in short_vectors(&e, &q(8))? {
        if nrm != q(8) {
            continue;
        }
        let vq: Vec<Q> = v.iter().map(|x| Q::from_integer(x.clone())).collect();
        let half: Vec<Q> = vq.iter().map(|x| x / q(2)).collect();
        if coset_min_norm(&CosetLattice::new(e.clone(), half))? != q(2) {
            continue;
        }
        let (a, b) = two_neighbors(&e, &vq)?;
        for cand in [a, b] {
            if !cand.is_even() && min_norm(&cand) == q(3) {
                return Ok(cand);
            }
        }
    }
    Err(ConstructionError::SearchFailed("no norm-8 class gives an odd neighbor of minimum 3".into()))
}

/// O^{(2)} = ⟨L′, w⟩ with L = BW16, v ∈ L of norm 6, w ∈ L* of norm 3 and
/// L′ = {u ∈ L : u·v even}.
pub fn build_o2() -> Result<GramLattice, ConstructionError> {
    let l = bw16()?;
    let g = l.gram().clone();
    let ginv = q_inverse(&g).expect("positive definite");
    let dual = GramLattice::new(ginv.clone())?;
    let vs: Vec<Vec<Q>> = short_vectors(&l, &q(6))?
        .into_iter()
        .filter(|(_, n)| *n == q(6))
        .map(|(v, _)| v.into_iter().map(Q::from_integer).collect())
        .collect();
    let ws: Vec<Vec<Q>> = short_vectors(&dual, &q(3))?
        .into_iter()
        .filter(|(_, n)| *n == q(3))
        .map(|(y, _)| {
            let y: Vec<Q> = y.into_iter().map(Q::from_integer).collect();
            q_mul(&vec![y], &ginv).remove(0)
        })
        .collect();
    let two = BigInt::from(2);
    for v in vs.iter().take(64) {
        let sub = even_pairing_sublattice(&l, v)?;
        for w in &ws {
            let w2: Vec<Q> = w.iter().map(|x| x * q(2)).collect();
            if !w2.iter().all(Q::is_integer) || !l.inner(&w2, v).to_integer().is_multiple_of(&two) {
                continue;
            }
            let mut gens = sub.clone();
            gens.push(w.clone());
            let basis = crate::lattice::matrix::hnf_q(&gens);
            let cand = l.sublattice(&basis)?.reduced();
            if cand.is_integral() && !cand.is_even() && min_norm(&cand) == q(3) {
                return Ok(cand);
            }
        }
    }
    Err(ConstructionError::SearchFailed("no (v, w) pair yields an integral lattice of minimum 3".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_entries_parse() {
        let e23 = catalog("E23").unwrap();
        assert_eq!(e23.gram(), &crate::lattice::matrix::q_from_i64(&[vec![4, 1], vec![1, 6]]));
        assert_eq!(catalog("O11").unwrap().det(), q(121));
        assert!(matches!(catalog("nope"), Err(ConstructionError::UnknownName(_))));
        assert_eq!(catalog("C6").unwrap().det(), q(36));
    }

    #[test]
    fn small_built_entries() {
        let e7 = cyclotomic_seven();
        assert_eq!(e7.det(), q(343));
        assert!(e7.is_even());
        assert_eq!(min_norm(&e7), q(4));
        let g = a2_tensor_d4();
        assert_eq!(g.det(), q(1296));
        assert_eq!(min_norm(&g), q(4));
    }
}
