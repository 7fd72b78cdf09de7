use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Rational};

use super::polynomial::PolynomialZ;
use super::{IntLit, LatticeError};

/// Square matrix with arbitrary-precision integer entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<IntLit>>", into = "Vec<Vec<IntLit>>")]
pub struct IntegerMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl TryFrom<Vec<Vec<IntLit>>> for IntegerMatrix {
    type Error = LatticeError;
    fn try_from(rows: Vec<Vec<IntLit>>) -> Result<Self, LatticeError> {
        Self::try_from(rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect::<Vec<Vec<BigInt>>>())
    }
}

impl From<IntegerMatrix> for Vec<Vec<IntLit>> {
    fn from(m: IntegerMatrix) -> Self {
        m.to_rows().into_iter().map(|r| r.into_iter().map(IntLit).collect()).collect()
    }
}

impl TryFrom<Vec<Vec<BigInt>>> for IntegerMatrix {
    type Error = LatticeError;
    fn try_from(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Shape("integer matrix must be square and nonempty".into()));
        }
        Ok(IntegerMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }
}

impl IntegerMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::try_from(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect::<Vec<Vec<BigInt>>>(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntegerMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.n + c]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n).map(<[BigInt]>::to_vec).collect()
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        Matrix::from_vec(
            self.n,
            self.n,
            self.data.iter().map(|v| Rational::from_integer(v.clone())).collect(),
        )
        .expect("square")
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.to_rational().to_f64()
    }
}

/// `det(X·I − A)`.
pub fn char_poly(a: &IntegerMatrix) -> PolynomialZ {
    let coeffs = a
        .to_rational()
        .char_poly()
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    PolynomialZ::new(coeffs).expect("monic")
}

/// Companion matrix: ones on the subdiagonal, last column `−a₀, …, −a_{n−1}`.
pub fn companion(p: &PolynomialZ) -> Result<IntegerMatrix, LatticeError> {
    if !p.is_monic() {
        return Err(LatticeError::NotMonic);
    }
    let n = p.degree();
    if n == 0 {
        return Err(LatticeError::Constant);
    }
    let mut data = vec![BigInt::zero(); n * n];
    for i in 1..n {
        data[i * n + (i - 1)] = BigInt::one();
    }
    for (i, a) in p.coeffs().iter().take(n).enumerate() {
        data[i * n + (n - 1)] = -a;
    }
    Ok(IntegerMatrix { n, data })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntegerMatrix) -> BigInt {
    let n = a.n;
    let mut m = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `|det A| = 1`.
pub fn is_unimodular_matrix(a: &IntegerMatrix) -> bool {
    determinant(a).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> PolynomialZ {
        PolynomialZ::from_i64(c).unwrap()
    }

    #[test]
    fn char_polys() {
        let a = IntegerMatrix::from_i64_rows(&[&[1, 1], &[1, 2]]).unwrap();
        assert_eq!(char_poly(&a), poly(&[1, -3, 1]));
        assert_eq!(char_poly(&IntegerMatrix::identity(2)), poly(&[1, -2, 1]));
        let quartic = poly(&[1, -3, 1, -3, 1]);
        assert_eq!(char_poly(&companion(&quartic).unwrap()), quartic);
    }

    #[test]
    fn companions() {
        let c = companion(&poly(&[1, -3, 1])).unwrap();
        assert_eq!(c, IntegerMatrix::from_i64_rows(&[&[0, -1], &[1, 3]]).unwrap());
        assert_eq!(companion(&poly(&[-1, 1])).unwrap(), IntegerMatrix::from_i64_rows(&[&[1]]).unwrap());
        let c4 = companion(&poly(&[1, -3, 1, -3, 1])).unwrap();
        let last: Vec<i64> = (0..4).map(|r| i64::try_from(c4.get(r, 3)).unwrap()).collect();
        assert_eq!(last, vec![-1, 3, -1, 3]);
        assert_eq!(companion(&poly(&[1, 2])), Err(LatticeError::NotMonic));
    }

    #[test]
    fn determinants() {
        let a = IntegerMatrix::from_i64_rows(&[&[1, 1], &[1, 2]]).unwrap();
        assert!(is_unimodular_matrix(&a));
        assert!(!is_unimodular_matrix(&IntegerMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap()));
        let p = poly(&[-1, 4, 0, 1]);
        assert_eq!(determinant(&companion(&p).unwrap()), BigInt::from(1));
        let z = IntegerMatrix::from_i64_rows(&[&[0, 1, 2], &[0, 3, 4], &[5, 6, 7]]).unwrap();
        assert_eq!(determinant(&z), BigInt::from(-10));
        let singular = IntegerMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(determinant(&singular), BigInt::zero());
    }

    #[test]
    fn serde_rows() {
        let a = IntegerMatrix::from_i64_rows(&[&[1, 1], &[1, 2]]).unwrap();
        let back: Vec<Vec<BigInt>> = a.to_rows();
        assert_eq!(IntegerMatrix::try_from(back).unwrap(), a);
        assert!(IntegerMatrix::try_from(vec![vec![BigInt::one(), BigInt::one()]]).is_err());
    }
}
