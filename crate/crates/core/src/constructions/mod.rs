//! Named lattices and code constructions: C^{(N)}, Construction A over F₄ and
//! Z/4Z, the hexacode family, the catalog of extremal modular lattices and
//! their odd and shorter associates, and the O^{(2)} recipe.

pub mod catalog;
pub mod f4;
pub mod z4;

use thiserror::Error;

use crate::arith::{divisors, Q};
use crate::lattice::matrix::{congruence, hnf_q, QMat};
use crate::lattice::{GramLattice, LatticeError};

pub use catalog::{build_o2, catalog, catalog_entries, CatalogEntry};
pub use f4::{construction_a_f4, hexacode, odd_hexacode, shorter_hexacode, F4AdditiveCode};
pub use z4::{construction_a_z4, octacode, Z4Code};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown lattice name {0:?}")]
    UnknownName(String),
    #[error("code is not self-dual: {0}")]
    NotSelfDual(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("malformed code data: {0}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The lattice spanned by rational rows `gens` inside an ambient space with Gram `ambient`.
pub fn span_lattice(gens: &QMat, ambient: &QMat) -> Result<GramLattice, ConstructionError> {
    let basis = hnf_q(gens);
    Ok(GramLattice::new(congruence(&basis, ambient))?.reduced())
}

/// C^{(N)} = ⊕_{d|N} √d Z.
pub fn c_lattice(n: u64) -> GramLattice {
    let ds: Vec<i64> = divisors(n).into_iter().map(|d| d as i64).collect();
    GramLattice::diagonal(&ds).expect("positive diagonal")
}

/// The E8 root lattice (Cartan matrix).
pub fn e8() -> GramLattice {
    GramLattice::from_i64(&[
        vec![2, -1, 0, 0, 0, 0, 0, 0],
        vec![-1, 2, -1, 0, 0, 0, 0, 0],
        vec![0, -1, 2, -1, 0, 0, 0, -1],
        vec![0, 0, -1, 2, -1, 0, 0, 0],
        vec![0, 0, 0, -1, 2, -1, 0, 0],
        vec![0, 0, 0, 0, -1, 2, -1, 0],
        vec![0, 0, 0, 0, 0, -1, 2, 0],
        vec![0, 0, -1, 0, 0, 0, 0, 2],
    ])
    .expect("E8 Cartan matrix is positive definite")
}

/// Code file contents: {"field": "F4" | "Z4", "n": …, "generators": [[symbols]]}.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CodeData {
    pub field: String,
    pub n: usize,
    pub generators: Vec<Vec<String>>,
}

pub enum AnyCode {
    F4(F4AdditiveCode),
    Z4(Z4Code),
}

impl CodeData {
    pub fn parse(&self) -> Result<AnyCode, ConstructionError> {
        if self.generators.iter().any(|g| g.len() != self.n) {
            return Err(ConstructionError::Parse(format!("every generator must have length {}", self.n)));
        }
        match self.field.as_str() {
            "F4" => {
                let gens = self
                    .generators
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|s| f4::parse_symbol(s).ok_or_else(|| ConstructionError::Parse(format!("bad F4 symbol {s:?}"))))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(AnyCode::F4(F4AdditiveCode { n: self.n, generators: gens }))
            }
            "Z4" => {
                let gens = self
                    .generators
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|s| match s.as_str() {
                                "0" => Ok(0),
                                "1" => Ok(1),
                                "2" => Ok(2),
                                "3" => Ok(3),
                                _ => Err(ConstructionError::Parse(format!("bad Z4 symbol {s:?}"))),
                            })
                            .collect::<Result<Vec<u8>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(AnyCode::Z4(Z4Code { n: self.n, generators: gens }))
            }
            other => Err(ConstructionError::Parse(format!("unknown field {other:?}"))),
        }
    }

    pub fn from_f4(code: &F4AdditiveCode) -> Self {
        CodeData {
            field: "F4".into(),
            n: code.n,
            generators: code.generators.iter().map(|g| g.iter().map(|&x| f4::symbol(x).to_string()).collect()).collect(),
        }
    }

    pub fn from_z4(code: &Z4Code) -> Self {
        CodeData {
            field: "Z4".into(),
            n: code.n,
            generators: code.generators.iter().map(|g| g.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }
}

/// True when every row of `basis` (ambient coordinates) lies in the lattice spanned by `lattice_basis`.
pub fn contains_rows(lattice_basis: &QMat, rows: &QMat) -> bool {
    let Some(inv) = crate::lattice::matrix::q_inverse(lattice_basis) else { return false };
    crate::lattice::matrix::q_mul(rows, &inv).iter().flatten().all(Q::is_integer)
}
