use std::fmt;

use super::scalar::Scalar;
use super::{LinalgError, TolerancePolicy};

/// Dense row-major matrix over a [`Scalar`] backend.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_literal()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(ambient, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r: Vec<Vec<S>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| S::from_i64(x)).collect())
            .collect();
        Self::from_rows(&r).expect("rectangular literal")
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }
    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let acc = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = acc;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// `vᵀ · self`.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape mismatch");
        let mut out = vec![S::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() {
                    *o = o.clone() + vi.clone() * m.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<S>) -> Matrix<S> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Matrix<S>) -> Matrix<S> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Matrix<S>, f: impl Fn(&S, &S) -> S) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Matrix<S>) -> Matrix<S> {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(S::abs_f64).fold(0.0, f64::max)
    }

    pub fn is_zero_matrix(&self, scale: f64, tol: &TolerancePolicy) -> bool {
        self.data.iter().all(|x| x.negligible(scale, tol))
    }

    /// Every entry negligible relative to `scale`.
    pub fn approx_eq(&self, other: &Matrix<S>, scale: f64, tol: &TolerancePolicy) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.sub(other).is_zero_matrix(scale, tol)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(S::to_f64).collect(),
        }
    }

    /// Submatrix on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m[(a, b)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Matrix<S>) -> Matrix<S> {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m[(self.rows + r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix<S>) -> Matrix<S> {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] =
                            a.clone() * other[(k, l)].clone();
                    }
                }
            }
        }
        m
    }

    /// Solve `self · X = rhs` for square nonsingular `self`, by Gaussian
    /// elimination with partial pivoting on magnitude.
    pub fn solve(&self, rhs: &Matrix<S>, tol: &TolerancePolicy) -> Result<Matrix<S>, LinalgError> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(LinalgError::Shape("solve needs a square system".into()));
        }
        let n = self.rows;
        let m = rhs.cols;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .abs_f64()
                        .partial_cmp(&a[(y, col)].abs_f64())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if a[(pivot, col)].negligible(scale, tol) {
                return Err(LinalgError::Singular);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap_rows(pivot, col);
            }
            let p = a[(col, col)].clone();
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / p.clone();
                for c in col..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
                for c in 0..m {
                    let v = b[(r, c)].clone() - f.clone() * b[(col, c)].clone();
                    b[(r, c)] = v;
                }
            }
        }
        for r in 0..n {
            let p = a[(r, r)].clone();
            for c in 0..m {
                let v = b[(r, c)].clone() / p.clone();
                b[(r, c)] = v;
            }
        }
        Ok(b)
    }

    pub fn inverse(&self, tol: &TolerancePolicy) -> Result<Matrix<S>, LinalgError> {
        self.solve(&Matrix::identity(self.rows), tol)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Characteristic polynomial `det(xI − self)`, coefficients constant term
    /// first, by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<S> {
        assert!(self.is_square(), "char_poly needs a square matrix");
        let n = self.rows;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        let mut m = Matrix::<S>::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] = next[(i, i)].clone() + coeffs[n - k + 1].clone();
            }
            m = next;
            let am = self.mul(&m);
            coeffs[n - k] = -(am.trace() / S::from_i64(k as i64));
        }
        coeffs
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

/// `⟨a, b⟩_G = aᵀ G b`.
pub fn inner<S: Scalar>(gram: &Matrix<S>, a: &[S], b: &[S]) -> S {
    dot(a, &gram.mul_vec(b))
}

pub fn axpy<S: Scalar>(alpha: &S, x: &[S], y: &mut [S]) {
    if alpha.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = yi.clone() + alpha.clone() * xi.clone();
        }
    }
}

pub fn scale_vec<S: Scalar>(alpha: &S, x: &[S]) -> Vec<S> {
    x.iter().map(|v| alpha.clone() * v.clone()).collect()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn unit_vector<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

pub fn max_abs_vec<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(S::abs_f64).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    #[test]
    fn product_and_commutator() {
        let e12 = Matrix::<Rational>::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let e21 = e12.transpose();
        let h = e12.commutator(&e21);
        assert_eq!(h, Matrix::from_i64_rows(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn exact_inverse() {
        let tol = TolerancePolicy::default();
        let a = Matrix::<Rational>::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse(&tol).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let singular = Matrix::<Rational>::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(singular.inverse(&tol), Err(LinalgError::Singular)));
    }

    #[test]
    fn char_poly_of_small_matrices() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, 1], &[1, 2]]);
        let p: Vec<Rational> = a.char_poly();
        let expect: Vec<Rational> = [1, -3, 1].iter().map(|&x| Rational::from_i64(x)).collect();
        assert_eq!(p, expect);
        let id = Matrix::<f64>::identity(3);
        assert_eq!(id.char_poly(), vec![-1.0, 3.0, -3.0, 1.0]);
    }

    #[test]
    fn kron_dimensions() {
        let a = Matrix::<f64>::identity(2);
        let b = Matrix::<f64>::from_i64_rows(&[&[1, 2, 3]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 6));
        assert_eq!(k[(1, 5)], 3.0);
        assert_eq!(k[(0, 5)], 0.0);
    }
}
