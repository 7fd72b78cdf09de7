//! Integer matrices and polynomials behind lattice constructions in almost
//! abelian groups, and a heuristic discreteness probe.

mod conjugacy;
mod integer;
mod polynomial;
mod probe;

pub use conjugacy::{expm, solve_conjugacy, verify_conjugacy, Conjugacy};
pub use integer::{char_poly, companion, determinant, is_unimodular_matrix, IntegerMatrix};
pub use polynomial::{factorize, find_factor, is_irreducible_over_z, unit_root_profile, PolynomialZ, UnitRootProfile};
pub use probe::{discreteness_probe, ProbeOutcome, DEFAULT_PROBE_TOL};

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::Matrix;

/// Integer as it appears in JSON: a number when it fits in `i64`, otherwise
/// a decimal string. Both forms are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntLit(pub BigInt);

impl Serialize for IntLit {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for IntLit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(IntLit(BigInt::from(v))),
            Raw::Text(t) => BigInt::from_str(t.trim())
                .map(IntLit)
                .map_err(|_| serde::de::Error::custom(format!("not an integer: {t:?}"))),
        }
    }
}

/// Integer matrix `A`, conjugator `C` with `C⁻¹·A·C = exp(t₀·A₀)`, and the
/// translation parts of the lattice generators in the new coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeData {
    pub integer_matrix: IntegerMatrix,
    pub t0: Option<f64>,
    pub conjugator: Option<Matrix<f64>>,
    pub translation_parts: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("constant term {constant} is not a unit")]
    NonUnit { constant: String },
    #[error("degree {degree} exceeds the supported maximum of {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("polynomial is zero or constant")]
    Constant,
    #[error("conjugating matrix is singular")]
    Singular,
    #[error("matrix is not diagonalizable over the complex numbers")]
    NotDiagonalizable,
    #[error("unsupported eigenvalue {re} + {im}i (only positive reals and unit-circle pairs have a real logarithm here)")]
    UnsupportedEigenvalue { re: f64, im: f64 },
}
