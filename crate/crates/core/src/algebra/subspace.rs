use nalgebra::DMatrix;

use super::matrix::{dot, inner, max_abs_vec, unit_vector, Matrix};
use super::scalar::{Scalar, ScalarMode};
use super::{LinalgError, TolerancePolicy};

/// Incrementally grown basis of a span.
///
/// Exact mode keeps an echelon form (each stored row has a unit pivot that
/// later rows vanish on). Float mode keeps an orthonormal basis built by
/// twice-iterated Gram–Schmidt; a candidate counts as dependent when its
/// residual is at most `rank_tol` times the largest input norm seen.
#[derive(Clone, Debug)]
pub struct SpanBuilder<S> {
    dim: usize,
    tol: TolerancePolicy,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
    originals: Vec<Vec<S>>,
    scale: f64,
}

impl<S: Scalar> SpanBuilder<S> {
    pub fn new(dim: usize, tol: TolerancePolicy) -> Self {
        SpanBuilder {
            dim,
            tol,
            rows: Vec::new(),
            pivots: Vec::new(),
            originals: Vec::new(),
            scale: 0.0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Vectors as inserted (not reduced), in insertion order.
    pub fn accepted(&self) -> &[Vec<S>] {
        &self.originals
    }

    fn reduce(&self, v: &[S], scale: f64) -> Option<Vec<S>> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut r = v.to_vec();
        match S::MODE {
            ScalarMode::Exact => {
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if r[p].is_zero() {
                        continue;
                    }
                    let f = r[p].clone();
                    for (x, y) in r.iter_mut().zip(row) {
                        if !y.is_zero() {
                            *x = x.clone() - f.clone() * y.clone();
                        }
                    }
                }
                if r.iter().all(S::is_zero) {
                    None
                } else {
                    Some(r)
                }
            }
            ScalarMode::Float => {
                for _ in 0..2 {
                    for row in &self.rows {
                        let c = dot(&r, row);
                        if c.is_zero() {
                            continue;
                        }
                        for (x, y) in r.iter_mut().zip(row) {
                            *x = x.clone() - c.clone() * y.clone();
                        }
                    }
                }
                let norm = dot(&r, &r).to_f64().sqrt();
                if norm <= self.tol.rank_tol * scale || scale == 0.0 {
                    None
                } else {
                    Some(r)
                }
            }
        }
    }

    fn norm(v: &[S]) -> f64 {
        v.iter().map(|x| x.to_f64() * x.to_f64()).sum::<f64>().sqrt()
    }

    /// True when `v` lies in the current span (at tolerance in float mode).
    pub fn contains(&self, v: &[S]) -> bool {
        let scale = self.scale.max(Self::norm(v));
        self.reduce(v, scale).is_none()
    }

    /// Add `v`; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        let norm = Self::norm(&v);
        self.scale = self.scale.max(norm);
        let Some(mut r) = self.reduce(&v, self.scale) else {
            return false;
        };
        match S::MODE {
            ScalarMode::Exact => {
                let p = r.iter().position(|x| !x.is_zero()).expect("nonzero residual");
                let inv = S::one() / r[p].clone();
                for x in r.iter_mut() {
                    if !x.is_zero() {
                        *x = x.clone() * inv.clone();
                    }
                }
                self.pivots.push(p);
            }
            ScalarMode::Float => {
                let n = Self::norm(&r);
                let inv = S::from_f64(1.0 / n);
                for x in r.iter_mut() {
                    *x = x.clone() * inv.clone();
                }
                self.pivots.push(0);
            }
        }
        self.rows.push(r);
        self.originals.push(v);
        true
    }

    pub fn into_subspace(self) -> Subspace<S> {
        let basis = match S::MODE {
            ScalarMode::Exact => self.originals,
            ScalarMode::Float => self.rows,
        };
        Subspace {
            ambient_dim: self.dim,
            basis,
        }
    }
}

/// Linear subspace of coordinate space given by an independent basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect(),
        }
    }

    /// Span of coordinate axes.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        Subspace {
            ambient_dim,
            basis: axes.iter().map(|&i| unit_vector(ambient_dim, i)).collect(),
        }
    }

    /// Span of arbitrary vectors; dependent ones are dropped.
    pub fn from_spanning<I>(ambient_dim: usize, vectors: I, tol: &TolerancePolicy) -> Self
    where
        I: IntoIterator<Item = Vec<S>>,
    {
        let mut b = SpanBuilder::new(ambient_dim, *tol);
        for v in vectors {
            b.insert(v);
        }
        b.into_subspace()
    }

    /// Caller guarantees independence.
    pub fn from_basis_unchecked(ambient_dim: usize, basis: Vec<Vec<S>>) -> Self {
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }
    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    fn builder(&self, tol: &TolerancePolicy) -> SpanBuilder<S> {
        let mut b = SpanBuilder::new(self.ambient_dim, *tol);
        for v in &self.basis {
            b.insert(v.clone());
        }
        b
    }

    pub fn contains(&self, v: &[S], tol: &TolerancePolicy) -> bool {
        self.builder(tol).contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace<S>, tol: &TolerancePolicy) -> bool {
        let b = self.builder(tol);
        other.basis.iter().all(|v| b.contains(v))
    }

    pub fn same_span(&self, other: &Subspace<S>, tol: &TolerancePolicy) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    pub fn sum(&self, other: &Subspace<S>, tol: &TolerancePolicy) -> Subspace<S> {
        Subspace::from_spanning(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
            tol,
        )
    }

    pub fn intersection(&self, other: &Subspace<S>, tol: &TolerancePolicy) -> Subspace<S> {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient_dim);
        }
        let a = self.dim();
        let mut cols: Vec<Vec<S>> = self.basis.clone();
        cols.extend(other.basis.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let m = Matrix::from_columns(self.ambient_dim, &cols);
        let (_, null) = rank_and_nullspace(&m, tol).expect("nonempty");
        let vectors = null.basis.iter().map(|c| {
            let mut v = vec![S::zero(); self.ambient_dim];
            for (coef, b) in c[..a].iter().zip(&self.basis) {
                super::matrix::axpy(coef, b, &mut v);
            }
            v
        });
        Subspace::from_spanning(self.ambient_dim, vectors.collect::<Vec<_>>(), tol)
    }

    /// `{x : ⟨x, v⟩_G = 0 for all v in self}`.
    pub fn g_orthogonal_complement(&self, gram: &Matrix<S>, tol: &TolerancePolicy) -> Subspace<S> {
        if self.is_zero() {
            return Subspace::full(self.ambient_dim);
        }
        let rows: Vec<Vec<S>> = self.basis.iter().map(|v| gram.vec_mul(v)).collect();
        let m = Matrix::from_rows(&rows).expect("rectangular");
        rank_and_nullspace(&m, tol).expect("nonempty").1
    }

    pub fn is_g_orthogonal_to(
        &self,
        other: &Subspace<S>,
        gram: &Matrix<S>,
        tol: &TolerancePolicy,
    ) -> bool {
        let scale = gram.max_abs().max(f64::MIN_POSITIVE);
        self.basis.iter().all(|a| {
            let na = max_abs_vec(a);
            other.basis.iter().all(|b| {
                let s = scale * na * max_abs_vec(b) * self.ambient_dim as f64;
                inner(gram, a, b).negligible(s, tol)
            })
        })
    }

    /// Matrix of the G-orthogonal projector onto this subspace:
    /// `B (BᵀGB)⁻¹ BᵀG`.
    pub fn g_projector(&self, gram: &Matrix<S>, tol: &TolerancePolicy) -> Result<Matrix<S>, LinalgError> {
        let n = self.ambient_dim;
        if self.is_zero() {
            return Ok(Matrix::zeros(n, n));
        }
        let b = Matrix::from_columns(n, &self.basis);
        let gb = gram.mul(&b);
        let small = b.transpose().mul(&gb);
        let coeffs = small.solve(&gb.transpose(), tol)?;
        Ok(b.mul(&coeffs))
    }

    /// G-orthogonal projection of `v` onto this subspace.
    pub fn g_project(&self, v: &[S], gram: &Matrix<S>, tol: &TolerancePolicy) -> Result<Vec<S>, LinalgError> {
        Ok(self.g_projector(gram, tol)?.mul_vec(v))
    }

    /// Coordinates of `v` in this basis (None if `v` is outside the span).
    pub fn coordinates(&self, v: &[S], tol: &TolerancePolicy) -> Option<Vec<S>> {
        if !self.contains(v, tol) {
            return None;
        }
        if self.is_zero() {
            return Some(Vec::new());
        }
        let b = Matrix::from_columns(self.ambient_dim, &self.basis);
        let bt = b.transpose();
        let normal = bt.mul(&b);
        let rhs = Matrix::from_columns(self.dim(), &[bt.mul_vec(v)]);
        normal.solve(&rhs, tol).ok().map(|c| c.column(0))
    }

    /// `A·V ⊆ V`.
    pub fn is_invariant_under(&self, op: &Matrix<S>, tol: &TolerancePolicy) -> bool {
        let b = self.builder(tol);
        let scale = op.max_abs();
        self.basis.iter().all(|v| {
            let image = op.mul_vec(v);
            // float images far below the operator scale are roundoff
            let tiny = S::MODE == ScalarMode::Float
                && max_abs_vec(&image) <= tol.rank_tol * scale * max_abs_vec(v);
            tiny || b.contains(&image)
        })
    }

    /// Reduced row echelon basis in exact mode; float bases are returned as is.
    pub fn canonical(&self) -> Subspace<S> {
        match S::MODE {
            ScalarMode::Float => self.clone(),
            ScalarMode::Exact => {
                if self.is_zero() {
                    return self.clone();
                }
                let m = Matrix::from_rows(&self.basis).expect("rectangular");
                let (r, _) = rref(&m);
                Subspace {
                    ambient_dim: self.ambient_dim,
                    basis: r.to_rows().into_iter().take(self.dim()).collect(),
                }
            }
        }
    }

    /// Sorted coordinate indices on which the G-orthogonal projector has a
    /// nonzero diagonal entry.
    pub fn support(&self, gram: &Matrix<S>, tol: &TolerancePolicy) -> Vec<usize> {
        match self.g_projector(gram, tol) {
            Ok(p) => (0..self.ambient_dim)
                .filter(|&i| !p[(i, i)].negligible(1.0, tol))
                .collect(),
            Err(_) => Vec::new(),
        }
    }

    pub fn to_f64(&self) -> Subspace<f64> {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(S::to_f64).collect())
                .collect(),
        }
    }
}

/// Reduced row echelon form and pivot columns (exact pivoting on the first
/// nonzero entry; meant for the exact backend).
pub fn rref<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = S::one() / a[(r, c)].clone();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] = a[(r, j)].clone() * inv.clone();
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn exact_nullspace<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

fn float_nullspace<S: Scalar>(m: &Matrix<S>, tol: &TolerancePolicy) -> Vec<Vec<S>> {
    let (rows, cols) = (m.rows(), m.cols());
    // pad to at least square so that V is complete
    let padded = rows.max(cols);
    let mut data = vec![0.0; padded * cols];
    for r in 0..rows {
        for c in 0..cols {
            data[r * cols + c] = m[(r, c)].to_f64();
        }
    }
    let dm = DMatrix::from_row_slice(padded, cols, &data);
    let svd = dm.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = tol.rank_tol * sigma_max;
    (0..v_t.nrows())
        .filter(|&i| sigma_max == 0.0 || svd.singular_values[i] <= threshold)
        .map(|i| (0..cols).map(|c| S::from_f64(v_t[(i, c)])).collect())
        .collect()
}

/// Rank and right nullspace of `m`.
///
/// Exact mode eliminates over the rationals; float mode takes the right
/// singular vectors whose singular values fall below `rank_tol` times the
/// largest one.
pub fn rank_and_nullspace<S: Scalar>(
    m: &Matrix<S>,
    tol: &TolerancePolicy,
) -> Result<(usize, Subspace<S>), LinalgError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(LinalgError::Empty);
    }
    let null = match S::MODE {
        ScalarMode::Exact => exact_nullspace(m),
        ScalarMode::Float => float_nullspace(m, tol),
    };
    let space = Subspace::from_basis_unchecked(m.cols(), null);
    Ok((m.cols() - space.dim(), space))
}

/// Rank of a set of vectors (or matrix rows).
pub fn rank_of<S: Scalar>(dim: usize, vectors: &[Vec<S>], tol: &TolerancePolicy) -> usize {
    let mut b = SpanBuilder::new(dim, *tol);
    for v in vectors {
        b.insert(v.clone());
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn identity_has_full_rank() {
        let tol = TolerancePolicy::default();
        let (r, null) = rank_and_nullspace(&Matrix::<Rational>::identity(3), &tol).unwrap();
        assert_eq!((r, null.dim()), (3, 0));
        let (r, null) = rank_and_nullspace(&Matrix::<f64>::identity(3), &tol).unwrap();
        assert_eq!((r, null.dim()), (3, 0));
    }

    #[test]
    fn zero_map_has_full_nullspace() {
        let tol = TolerancePolicy::default();
        let (r, null) = rank_and_nullspace(&Matrix::<Rational>::zeros(2, 4), &tol).unwrap();
        assert_eq!((r, null.dim()), (0, 4));
        let (r, null) = rank_and_nullspace(&Matrix::<f64>::zeros(2, 4), &tol).unwrap();
        assert_eq!((r, null.dim()), (0, 4));
    }

    #[test]
    fn all_ones_two_by_two() {
        let tol = TolerancePolicy::default();
        let m = Matrix::<Rational>::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let (r, null) = rank_and_nullspace(&m, &tol).unwrap();
        assert_eq!(r, 1);
        let expect = Subspace::from_basis_unchecked(2, vec![vec![q(1), q(-1)]]);
        assert!(null.same_span(&expect, &tol));

        let mf = m.to_f64();
        let (r, null) = rank_and_nullspace(&mf, &tol).unwrap();
        assert_eq!(r, 1);
        let v = &null.basis()[0];
        assert!((v[0] + v[1]).abs() < 1e-12);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        let tol = TolerancePolicy::default();
        let m = Matrix::<f64>::zeros(0, 3);
        assert!(matches!(rank_and_nullspace(&m, &tol), Err(LinalgError::Empty)));
    }

    #[test]
    fn intersection_and_complement() {
        let tol = TolerancePolicy::default();
        let a = Subspace::<Rational>::coordinate(3, &[0, 1]);
        let b = Subspace::<Rational>::coordinate(3, &[1, 2]);
        let i = a.intersection(&b, &tol);
        assert!(i.same_span(&Subspace::coordinate(3, &[1]), &tol));
        let gram = Matrix::<Rational>::from_i64_rows(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 1]]);
        let c = Subspace::coordinate(3, &[0]).g_orthogonal_complement(&gram, &tol);
        assert_eq!(c.dim(), 2);
        assert!(c.is_g_orthogonal_to(&Subspace::coordinate(3, &[0]), &gram, &tol));
        let p = c.g_projector(&gram, &tol).unwrap();
        assert_eq!(p.mul(&p), p);
    }

    #[test]
    fn float_span_ignores_roundoff() {
        let tol = TolerancePolicy::default();
        let mut b = SpanBuilder::<f64>::new(2, tol);
        assert!(b.insert(vec![1.0, 0.0]));
        assert!(!b.insert(vec![1e-14, 0.0]));
        assert!(!b.insert(vec![3.0, 1e-13]));
        assert!(b.insert(vec![1.0, 1.0]));
        assert_eq!(b.rank(), 2);
    }
}
