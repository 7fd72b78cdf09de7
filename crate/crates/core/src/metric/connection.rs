use serde::Serialize;

use crate::algebra::{axpy, LinalgError, Matrix, Scalar, TolerancePolicy};

use super::MetricLieAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionKind {
    LeviCivita,
    Weyl,
}

/// Left-invariant connection: `∇_{e_i} e_j = Σ_k Γ[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantConnection<S> {
    dim: usize,
    coeffs: Vec<S>,
    kind: ConnectionKind,
}

impl<S: Scalar> InvariantConnection<S> {
    pub fn from_coeffs(dim: usize, coeffs: Vec<S>, kind: ConnectionKind) -> Self {
        assert_eq!(coeffs.len(), dim * dim * dim);
        InvariantConnection { dim, coeffs, kind }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn kind(&self) -> ConnectionKind {
        self.kind
    }
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &S {
        &self.coeffs[(i * self.dim + j) * self.dim + k]
    }

    /// Coefficients of `∇_{e_i} e_j`.
    pub fn on_basis(&self, i: usize, j: usize) -> &[S] {
        let start = (i * self.dim + j) * self.dim;
        &self.coeffs[start..start + self.dim]
    }

    /// `∇_x y`.
    pub fn covariant(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&(xi.clone() * yj.clone()), self.on_basis(i, j), &mut out);
            }
        }
        out
    }

    /// Matrix of `∇_{e_i}` (column `j` is `∇_{e_i} e_j`).
    pub fn operator(&self, i: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, v) in self.on_basis(i, j).iter().enumerate() {
                m[(k, j)] = v.clone();
            }
        }
        m
    }

    pub fn operators(&self) -> Vec<Matrix<S>> {
        (0..self.dim).map(|i| self.operator(i)).collect()
    }

    /// Matrix of `∇_x`.
    pub fn operator_of(&self, x: &[S]) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.operator(i).scale(xi));
            }
        }
        m
    }

    pub fn scale(&self) -> f64 {
        crate::algebra::max_abs_vec(&self.coeffs)
    }

    /// Largest entry of `Γ[i][j] − Γ[j][i] − c[i][j]` over all pairs.
    pub fn torsion_defect(&self, g: &MetricLieAlgebra<S>) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let d = self.gamma(i, j, k).clone() - self.gamma(j, i, k).clone() - g.c(i, j, k).clone();
                    worst = worst.max(d.abs_f64());
                }
            }
        }
        worst
    }

    pub fn is_torsion_free(&self, g: &MetricLieAlgebra<S>, tol: &TolerancePolicy) -> bool {
        let n = self.dim;
        let scale = self.scale().max(g.bracket_scale()).max(1.0);
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    (self.gamma(i, j, k).clone() - self.gamma(j, i, k).clone() - g.c(i, j, k).clone())
                        .negligible(scale, tol)
                })
            })
        })
    }
}

/// Levi-Civita connection from the Koszul formula
/// `2⟨∇_x y, z⟩ = ⟨[x,y],z⟩ + ⟨[z,x],y⟩ − ⟨[y,z],x⟩`.
pub fn levi_civita<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
) -> Result<InvariantConnection<S>, LinalgError> {
    let n = g.dim();
    let gram = g.gram();
    // ⟨[e_a, e_b], e_c⟩
    let mut lowered = vec![S::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            let low = gram.vec_mul(g.bracket_basis(a, b));
            for (c, v) in low.into_iter().enumerate() {
                lowered[(a * n + b) * n + c] = v;
            }
        }
    }
    let l = |a: usize, b: usize, c: usize| lowered[(a * n + b) * n + c].clone();
    let half = S::from_ratio(1, 2);
    // rows indexed by (i, j), columns by the lowered index k
    let mut rhs = Matrix::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                rhs[(k, i * n + j)] = half.clone() * (l(i, j, k) + l(k, i, j) - l(j, k, i));
            }
        }
    }
    let solved = gram.solve(&rhs, tol)?;
    let mut coeffs = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                coeffs[(i * n + j) * n + k] = solved[(k, i * n + j)].clone();
            }
        }
    }
    Ok(InvariantConnection::from_coeffs(n, coeffs, ConnectionKind::LeviCivita))
}

/// Curvature operators `R(e_i, e_j) = [∇_i, ∇_j] − ∇_{[e_i, e_j]}`.
#[derive(Clone, Debug)]
pub struct Curvature<S: Scalar> {
    dim: usize,
    ops: Vec<Matrix<S>>,
    scale: f64,
}

impl<S: Scalar> Curvature<S> {
    pub fn get(&self, i: usize, j: usize) -> &Matrix<S> {
        &self.ops[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Magnitude of the terms the operators were assembled from.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `R(e_i, e_j)` for `i < j`.
    pub fn independent_pairs(&self) -> impl Iterator<Item = ((usize, usize), &Matrix<S>)> {
        let n = self.dim;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).map(move |(i, j)| ((i, j), self.get(i, j)))
    }

    pub fn is_flat(&self, tol: &TolerancePolicy) -> bool {
        self.ops.iter().all(|m| m.is_zero_matrix(self.scale, tol))
    }

    /// `R(x, y) z`.
    pub fn apply(&self, x: &[S], y: &[S], z: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let v = self.get(i, j).mul_vec(z);
                axpy(&(xi.clone() * yj.clone()), &v, &mut out);
            }
        }
        out
    }
}

pub fn curvature<S: Scalar>(conn: &InvariantConnection<S>, g: &MetricLieAlgebra<S>) -> Curvature<S> {
    let n = g.dim();
    let nabla = conn.operators();
    let mut ops = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut r = nabla[i].commutator(&nabla[j]);
            for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                if !c.is_zero() {
                    r = r.sub(&nabla[k].scale(c));
                }
            }
            ops.push(r);
        }
    }
    let c = conn.scale();
    let scale = (c * c.max(g.bracket_scale()) * n as f64).max(1e-300);
    Curvature { dim: n, ops, scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{unit_vector, Rational};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn e(i: usize) -> Vec<Rational> {
        unit_vector(3, i)
    }

    fn sol3() -> MetricLieAlgebra<Rational> {
        let names = ["X", "Y", "T"].map(String::from).to_vec();
        let mut g = MetricLieAlgebra::with_names(names, Matrix::identity(3));
        g.set_bracket(2, 0, &[q(1), q(0), q(0)]);
        g.set_bracket(2, 1, &[q(0), q(-1), q(0)]);
        g
    }

    #[test]
    fn abelian_connection_vanishes() {
        let tol = TolerancePolicy::default();
        let g = MetricLieAlgebra::<Rational>::abelian(3);
        let c = levi_civita(&g, &tol).unwrap();
        assert!(c.coeffs().iter().all(|x| *x == q(0)));
        assert!(curvature(&c, &g).is_flat(&tol));
    }

    #[test]
    fn sol3_connection_table() {
        let tol = TolerancePolicy::default();
        let g = sol3();
        let c = levi_civita(&g, &tol).unwrap();
        let (x, y, t) = (e(0), e(1), e(2));
        let neg = |v: Vec<Rational>| v.into_iter().map(|a| -a).collect::<Vec<_>>();
        assert_eq!(c.covariant(&x, &x), t);
        assert_eq!(c.covariant(&y, &y), neg(t.clone()));
        assert_eq!(c.covariant(&x, &t), neg(x.clone()));
        assert_eq!(c.covariant(&y, &t), y);
        assert_eq!(c.covariant(&x, &y), vec![q(0); 3]);
        assert!(c.operator(2).is_zero_matrix(1.0, &tol));
        assert!(c.is_torsion_free(&g, &tol));
    }

    #[test]
    fn heisenberg_half_bracket() {
        let tol = TolerancePolicy::default();
        let mut g = MetricLieAlgebra::<Rational>::abelian(3);
        g.set_bracket(0, 1, &[q(0), q(0), q(1)]);
        let c = levi_civita(&g, &tol).unwrap();
        assert_eq!(c.on_basis(0, 1), &[q(0), q(0), Rational::from_ratio(1, 2)]);
    }

    #[test]
    fn sol3_curvature_values() {
        let tol = TolerancePolicy::default();
        let g = sol3();
        let r = curvature(&levi_civita(&g, &tol).unwrap(), &g);
        let (x, y, t) = (e(0), e(1), e(2));
        assert_eq!(r.apply(&x, &y, &y), x);
        assert_eq!(r.apply(&x, &y, &x), vec![q(0), q(-1), q(0)]);
        assert_eq!(r.apply(&x, &t, &t), vec![q(-1), q(0), q(0)]);
        assert!(!r.is_flat(&tol));
    }

    #[test]
    fn bi_invariant_so3_curvature() {
        let tol = TolerancePolicy::default();
        let mut g = MetricLieAlgebra::<Rational>::abelian(3);
        g.set_bracket(0, 1, &e(2));
        g.set_bracket(1, 2, &e(0));
        g.set_bracket(2, 0, &e(1));
        let r = curvature(&levi_civita(&g, &tol).unwrap(), &g);
        let quarter = Rational::from_ratio(-1, 4);
        for i in 0..3 {
            for j in 0..3 {
                let expected = g.ad_of(g.bracket_basis(i, j)).scale(&quarter);
                assert_eq!(r.get(i, j), &expected);
            }
        }
    }

    #[test]
    fn koszul_with_a_skewed_metric() {
        let tol = TolerancePolicy::default();
        let gram = Matrix::<Rational>::from_i64_rows(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 3]]);
        let g = sol3().with_gram(gram.clone());
        let c = levi_civita(&g, &tol).unwrap();
        for i in 0..3 {
            let d = c.operator(i);
            let skew = gram.mul(&d).add(&d.transpose().mul(&gram));
            assert!(skew.is_zero_matrix(1.0, &tol));
        }
        assert!(c.is_torsion_free(&g, &tol));
    }
}
